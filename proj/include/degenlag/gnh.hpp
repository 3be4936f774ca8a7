#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "degenlag/elimination.hpp"
#include "degenlag/forms.hpp"
#include "degenlag/pontryagin.hpp"
#include "degenlag/probe.hpp"
#include "degenlag/solution.hpp"
#include "degenlag/variety.hpp"

namespace degenlag {

/// (M1, Omega, alpha): a 2-form and 1-form on a chart, restricted to the zero
/// set of `initial_constraints` (empty: the whole box).
///
/// On a constrained M1 the equation i_X Omega = alpha is imposed on T M1 only,
/// i.e. Omega^T x - alpha must lie in the span of the constraint differentials.
struct PresymplecticSystem {
    Chart chart;
    TwoForm omega;
    ExprVector alpha;
    ExprVector initial_constraints;
    Box box;
};

/// Skinner-Rusk system on W0: (Omega, dD), unconstrained.
PresymplecticSystem skinner_rusk_system(const PontryaginSystem& ps);
/// Lagrangian system on P1 = TQ: (Omega_L, dE_L).
PresymplecticSystem lagrangian_system(const LagrangianSystem& sys);
/// Hamiltonian system on M1 inside T*Q: (dq ^ dp, dh1) restricted to `m1`.
PresymplecticSystem hamiltonian_system(std::size_t n, const Expr& h1, const ExprVector& m1, const Box& box);

struct GnhConfig {
    std::size_t max_iter = 0;    ///< 0 selects 3n + 3
    std::size_t probes = 32;     ///< points per level used for pivot and redundancy decisions
    std::uint64_t seed = 42;
    double zero_tol = 1e-9;
    std::size_t max_attempts = 10000;  ///< sampling budget per level (emptiness detection)
};

struct ChainStatus {
    enum class Kind { Stabilized, Empty, Budget };
    Kind kind = Kind::Budget;
    std::size_t index = 0;
    bool probabilistic = false;  ///< Empty: decided by failing to find points

    std::string to_string() const;
};

/// W1 (or M1, P1) ⊇ W2 ⊇ ... as cumulative constraint lists; levels[0] is level 1.
struct ConstraintChain {
    std::vector<ExprVector> levels;
    ChainStatus status;
    std::optional<SolutionFamily> family;  ///< set when Stabilized, valid on the final level

    std::size_t final_level() const { return levels.size(); }
    const ExprVector& level(std::size_t k) const { return levels.at(k - 1); }
    const ExprVector& final_constraints() const { return levels.back(); }
};

struct Solvability {
    ExprVector conditions;
    SolutionFamily family;
};

/// Compatibility conditions of i_X Omega = alpha on M1 (no tangency beyond T M1)
/// and the general solution there. Pivot decisions use probes of M1.
Solvability solvability_conditions(const PresymplecticSystem& sys, const GnhConfig& config = {});

/// The constraint algorithm with symbolic constraint generation.
/// Throws NonConstantRank, IndeterminateZeroTest.
ConstraintChain run_symbolic(const PresymplecticSystem& sys, const GnhConfig& config = {});

/// Least-squares residual of i_X Omega = alpha at a point for a given
/// numeric field x, modulo the differentials of the initial constraints.
double equation_residual(const PresymplecticSystem& sys, std::span<const double> point, std::span<const double> x);

/// Pointwise membership in the levels of a chain.
///
/// A point is in level 1 when it satisfies the initial constraints and the
/// equation is solvable there; it is in level k+1 when it is in level k and
/// the equation is solvable with X tangent to level k (tangency rows built
/// from the Jacobian of level k's constraints). Decided by least-squares
/// residuals against `tolerance`.
class PointwiseClassifier {
public:
    PointwiseClassifier(const PresymplecticSystem& sys, const ConstraintChain& chain, double tolerance = 1e-8);

    /// Deepest level containing x (0: not even in level 1).
    std::size_t classify(std::span<const double> x) const;
    /// Solvability residual at each step, up to the first failure.
    std::vector<double> residuals(std::span<const double> x) const;
    std::size_t levels() const { return jacobians_.size(); }

private:
    double step_residual(std::span<const double> x, std::size_t tangency_level) const;

    std::size_t dim_;
    double tol_;
    CompiledMatrix omega_;
    CompiledVector alpha_;
    CompiledVector initial_;
    CompiledJacobian initial_jacobian_;
    std::vector<CompiledJacobian> jacobians_;  ///< per level
};

/// run_pointwise for a single point: deepest level containing it.
std::size_t run_pointwise(const PresymplecticSystem& sys, const ConstraintChain& chain, std::span<const double> point,
                          double tolerance = 1e-8);

/// Classifies many points; the serial path is the reference for the OpenMP one.
std::vector<std::size_t> classify_points(const PointwiseClassifier& classifier, const PointSet& points, Exec exec);

/// Deepest level whose constraints all hold at x within `tolerance`.
std::size_t symbolic_membership(const ConstraintChain& chain, const Chart& chart, std::span<const double> x,
                                double tolerance);
std::vector<std::size_t> symbolic_membership(const ConstraintChain& chain, const Chart& chart, const PointSet& points,
                                             double tolerance, Exec exec);

struct LevelProjection {
    std::size_t level = 0;
    std::size_t sampled = 0;
    std::size_t passed = 0;
    double worst = 0.0;
    bool sampling_failed = false;
};

struct ProjectionReport {
    std::vector<LevelProjection> forward;  ///< pr(W_k) inside the target's level k
    LevelProjection reverse;               ///< final target level lifts back into W_f
    bool ok() const;
};

/// pr2(W_k) ⊂ M_k for every SR level (k beyond the Hamiltonian chain compares
/// against its final level), and pr2(W_f) ⊇ M_f probed by lifting M_f samples
/// back into W_f by solving for v.
ProjectionReport check_projection_lemma(const PontryaginSystem& ps, const ConstraintChain& sr_chain,
                                        const ConstraintChain& ham_chain, std::size_t samples, std::uint64_t seed,
                                        double tolerance = 1e-8);

/// Same for pr1: (q, v, p) -> (q, v) against the Lagrangian chain; the reverse
/// direction lifts P_f samples by solving for p.
ProjectionReport check_projection_lemma_lagrangian(const PontryaginSystem& ps, const ConstraintChain& sr_chain,
                                                   const ConstraintChain& lag_chain, std::size_t samples,
                                                   std::uint64_t seed, double tolerance = 1e-8);

}  // namespace degenlag
