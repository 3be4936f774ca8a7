#pragma once

#include <span>
#include <vector>

#include "degenlag/forms.hpp"
#include "degenlag/mechanics.hpp"
#include "degenlag/solution.hpp"

namespace degenlag {

/// Skinner-Rusk data on W0 = TQ (+) T*Q with chart (q, v, p).
struct PontryaginSystem {
    LagrangianSystem lagrangian;
    Chart chart;      ///< (q1..qn, v1..vn, p1..pn)
    Expr D;           ///< v^A p_A - L
    TwoForm omega;    ///< dq^A ^ dp_A
    ExprVector dD;    ///< (-dL/dq, p - dL/dv, v)

    std::size_t n() const { return lagrangian.n(); }
    Box box() const { return lagrangian.box(); }
};

PontryaginSystem build_pontryagin(const LagrangianSystem& sys);

/// p_A - dL/dv^A; the zero set is W1 = graph(FL).
ExprVector primary_constraints(const PontryaginSystem& ps);

/// Solutions of i_X Omega = dD along W1: a = v, c = +dL/dq, b free.
SolutionFamily solution_family_on_W1(const PontryaginSystem& ps);

/// The unique b solving C b = dL/dq - (d^2 L / dv dq) v for regular L,
/// inverted symbolically via the adjugate (n <= 4). Throws SingularHessian
/// if the Hessian is not certified regular, PreconditionFailed if n > 4.
ExprVector regular_b(const PontryaginSystem& ps, const ZeroTestConfig& config = {});

/// Numeric b at one (q, v) point; works for any n. Throws SingularHessian
/// if C is numerically singular there.
std::vector<double> regular_b_at(const PontryaginSystem& ps, std::span<const double> qv);

}  // namespace degenlag
