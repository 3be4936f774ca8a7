#include "degenlag/pontryagin.hpp"

#include "degenlag/compiled.hpp"
#include "degenlag/error.hpp"
#include "degenlag/linalg.hpp"

namespace degenlag {

namespace {

Expr v(std::size_t a) { return Expr::variable(velocity_name(a)); }
Expr p(std::size_t a) { return Expr::variable(momentum_name(a)); }

// Right-hand side of C b = rhs in the Euler-Lagrange equations.
ExprVector euler_lagrange_rhs(const LagrangianSystem& sys) {
    const std::size_t n = sys.n();
    const ExprVector fl = legendre_map(sys);
    ExprVector rhs(n);
    for (std::size_t a = 0; a < n; ++a) {
        Expr r = differentiate(sys.lagrangian(), position_name(a));
        for (std::size_t c = 0; c < n; ++c) r = r - v(c) * differentiate(fl[a], position_name(c));
        rhs[a] = r;
    }
    return rhs;
}

}  // namespace

PontryaginSystem build_pontryagin(const LagrangianSystem& sys) {
    const std::size_t n = sys.n();
    const Chart chart = Chart::pontryagin(n);
    Expr d;
    for (std::size_t a = 0; a < n; ++a) d = d + v(a) * p(a);
    d = d - sys.lagrangian();

    TwoForm omega(chart);
    for (std::size_t a = 0; a < n; ++a) omega.set(a, 2 * n + a, Expr(1));

    return PontryaginSystem{sys, chart, d, omega, differential(d, chart)};
}

ExprVector primary_constraints(const PontryaginSystem& ps) {
    const ExprVector fl = legendre_map(ps.lagrangian);
    ExprVector out;
    for (std::size_t a = 0; a < ps.n(); ++a) out.push_back(p(a) - fl[a]);
    return out;
}

SolutionFamily solution_family_on_W1(const PontryaginSystem& ps) {
    const std::size_t n = ps.n();
    SolutionFamily fam;
    fam.validity_level = 1;
    fam.particular.assign(3 * n, Expr());
    for (std::size_t a = 0; a < n; ++a) {
        fam.particular[a] = v(a);
        fam.particular[2 * n + a] = differentiate(ps.lagrangian.lagrangian(), position_name(a));
    }
    for (std::size_t a = 0; a < n; ++a) {
        ExprVector e(3 * n, Expr());
        e[n + a] = Expr(1);
        fam.null_basis.push_back(std::move(e));
    }
    return fam;
}

ExprVector regular_b(const PontryaginSystem& ps, const ZeroTestConfig& config) {
    const std::size_t n = ps.n();
    if (n > 4) throw PreconditionFailed("regular_b: symbolic inverse limited to n <= 4, use regular_b_at");
    const Hessian h = hessian(ps.lagrangian, config);
    if (h.verdict != Regularity::Regular) throw SingularHessian("regular_b: Hessian is not regular on the box");
    const Expr det = determinant(h.matrix);
    const ExprVector rhs = euler_lagrange_rhs(ps.lagrangian);
    // b^A = sum_B adj(C)_AB rhs_B / det, adj(C)_AB = (-1)^(A+B) minor_BA
    ExprVector b(n);
    for (std::size_t a = 0; a < n; ++a) {
        Expr acc;
        for (std::size_t bb = 0; bb < n; ++bb) {
            std::vector<ExprVector> minor;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == bb) continue;
                ExprVector row;
                for (std::size_t c = 0; c < n; ++c) {
                    if (c != a) row.push_back(h.matrix[r][c]);
                }
                minor.push_back(std::move(row));
            }
            const Expr cof = ((a + bb) % 2 == 0) ? determinant(minor) : -determinant(minor);
            acc = acc + cof * rhs[bb];
        }
        b[a] = acc / det;
    }
    return b;
}

std::vector<double> regular_b_at(const PontryaginSystem& ps, std::span<const double> qv) {
    const std::size_t n = ps.n();
    const Chart& tq = ps.lagrangian.chart();
    const ExprVector fl = legendre_map(ps.lagrangian);
    std::vector<ExprVector> c(n, ExprVector(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) c[a][b] = differentiate(fl[a], velocity_name(b));
    }
    const Matrix cm = CompiledMatrix(c, tq)(qv);
    const std::vector<double> r = CompiledVector(euler_lagrange_rhs(ps.lagrangian), tq)(qv);
    Eigen::FullPivLU<Matrix> lu(cm);
    if (!lu.isInvertible()) throw SingularHessian("regular_b_at: Hessian is singular at the given point");
    const Vector b = lu.solve(Eigen::Map<const Vector>(r.data(), static_cast<Eigen::Index>(n)));
    return {b.data(), b.data() + n};
}

}  // namespace degenlag
