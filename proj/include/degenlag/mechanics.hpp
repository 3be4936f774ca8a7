#pragma once

#include <cstddef>
#include <vector>

#include "degenlag/chart.hpp"
#include "degenlag/expr.hpp"
#include "degenlag/forms.hpp"
#include "degenlag/probe.hpp"
#include "degenlag/zero_test.hpp"

namespace degenlag {

/// A Lagrangian L(q, v) on TQ with Q an open box of R^n.
///
/// The box is kept over the full (q, v, p) chart so that every setting
/// (Lagrangian, Hamiltonian, Skinner-Rusk) draws probes from the same ranges.
class LagrangianSystem {
public:
    /// Throws UnknownIdentifier if L references anything but q1..qn, v1..vn.
    LagrangianSystem(std::size_t n, Expr lagrangian);
    LagrangianSystem(std::size_t n, Expr lagrangian, Box box);

    std::size_t n() const { return n_; }
    const Expr& lagrangian() const { return L_; }
    const Chart& chart() const { return chart_; }  ///< (q, v)
    const Box& box() const { return box_; }        ///< over (q, v, p)
    Box box_for(const Chart& chart) const { return box_.rebased(chart); }

private:
    std::size_t n_;
    Expr L_;
    Chart chart_;
    Box box_;
};

/// Components dL/dv^A of FL(q, v) = (q, dL/dv).
ExprVector legendre_map(const LagrangianSystem& sys);

/// E_L = v^A dL/dv^A - L.
Expr energy(const LagrangianSystem& sys);

/// theta_L = dL/dv^A dq^A, as components over (q, v).
ExprVector theta_L(const LagrangianSystem& sys);

/// Omega_L = dq^A ^ d(dL/dv^A) = -d theta_L.
TwoForm omega_L(const LagrangianSystem& sys);

enum class Regularity { Regular, Singular, Indeterminate };

struct Hessian {
    std::vector<ExprVector> matrix;  ///< C_AB = d^2 L / dv^A dv^B
    Regularity verdict = Regularity::Indeterminate;
};

/// Velocity Hessian with a probe-based regularity verdict on the system box:
/// Singular if det C vanishes identically, Regular if it is nonzero at every
/// probe, Indeterminate otherwise.
Hessian hessian(const LagrangianSystem& sys, const ZeroTestConfig& config = {});

/// Rank of the Jacobian of (q, v) -> (q, FL(q, v)) over probes of the box.
/// Constant rank is the pointwise part of almost-regularity; connectedness of
/// the fibres is not checked.
struct LegendreRank {
    std::size_t min_rank = 0;
    std::size_t max_rank = 0;
    std::size_t samples = 0;  ///< probes where the Jacobian evaluated
    bool constant() const { return samples > 0 && min_rank == max_rank; }
};
LegendreRank legendre_rank(const LagrangianSystem& sys, const ZeroTestConfig& config = {});

/// Symbolic determinant by cofactor expansion (intended for small matrices).
Expr determinant(const std::vector<ExprVector>& m);

/// Pullback of a 2-form on (q, v) along q -> (q, Z(q)).
TwoForm pullback_two_form(const TwoForm& omega, const ExprVector& z, const Chart& configuration);

/// True iff a^A - v^A is identically zero for every A, where X = (a, b) on (q, v).
bool sode_check(const ExprVector& x, const Box& tangent_box, const ZeroTestConfig& config = {});

}  // namespace degenlag
