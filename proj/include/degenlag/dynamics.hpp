#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "degenlag/gnh.hpp"
#include "degenlag/hamilton_jacobi.hpp"
#include "degenlag/probe.hpp"

namespace degenlag {

/// Sampled curve; states[i] is ordered like `names`.
struct Trajectory {
    std::vector<std::string> names;
    std::vector<double> times;
    std::vector<std::vector<double>> states;

    std::size_t size() const { return times.size(); }
    std::size_t dimension() const { return names.size(); }
};

struct IntegrationResult {
    Trajectory trajectory;            ///< up to the last completed step on error
    std::optional<std::string> error;
    double max_violation = 0.0;       ///< constrained integration only

    bool ok() const { return !error.has_value(); }
};

/// Fixed-step RK4 for x' = F(x) on [0, t_end]; the step is t_end / ceil(t_end / h)
/// so that the last sample lands on t_end. Throws PreconditionFailed for
/// h <= 0, t_end < 0 or x0 outside the box.
IntegrationResult integrate_field(const ExprVector& field, const Box& box, std::span<const double> x0, double t_end,
                                  double h);

/// RK4 step followed by Newton retraction (1e-12, at most 20 iterations) onto
/// the zero set of `constraints`. x0 must satisfy them within 1e-8.
IntegrationResult integrate_on_constraints(const ExprVector& field, const ExprVector& constraints, const Box& box,
                                           std::span<const double> x0, double t_end, double h);

/// Independent trajectories from several starting points.
std::vector<IntegrationResult> integrate_batch(const ExprVector& field, const Box& box, const PointSet& starts,
                                               double t_end, double h, Exec exec);

struct LiftResult {
    Trajectory base;      ///< c(t) on Q under X^sigma
    Trajectory lifted;    ///< sigma o c on TQ (+) T*Q
    Trajectory integral;  ///< integral curve of X from sigma(q0), kept on W_f
    double distance = 0.0;          ///< sup over common samples of |lifted - integral|_inf
    std::vector<double> residuals;  ///< |Omega . d/dt(sigma o c) - dD|_inf per sample
    double max_residual = 0.0;
    std::optional<std::string> error;
};

/// Integrates X^sigma from q0, lifts through sigma and checks that the lifted
/// curve solves the Skinner-Rusk equation. d/dt(sigma o c) is T sigma(X^sigma)
/// evaluated along c. Throws PreconditionFailed unless sigma(q0) is in W_f
/// within 1e-8.
LiftResult lift_and_compare(const Section& s, const ExprVector& x, const PontryaginSystem& ps,
                            const ConstraintChain& chain, std::span<const double> q0, double t_end, double h);

/// Header "t,<names>", one row per sample, 17 significant digits.
void write_csv(const Trajectory& trajectory, std::ostream& out);
std::string to_csv(const Trajectory& trajectory);

}  // namespace degenlag
