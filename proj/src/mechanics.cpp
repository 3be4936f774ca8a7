#include "degenlag/mechanics.hpp"

#include <algorithm>
#include <cmath>

#include "degenlag/compiled.hpp"
#include "degenlag/error.hpp"
#include "degenlag/linalg.hpp"

namespace degenlag {

LagrangianSystem::LagrangianSystem(std::size_t n, Expr lagrangian)
    : LagrangianSystem(n, std::move(lagrangian), Box(Chart::pontryagin(n))) {}

LagrangianSystem::LagrangianSystem(std::size_t n, Expr lagrangian, Box box)
    : n_(n), L_(std::move(lagrangian)), chart_(Chart::tangent(n)), box_(box.rebased(Chart::pontryagin(n))) {
    for (const auto& name : L_.variables()) {
        if (!chart_.contains(name)) throw UnknownIdentifier(0, name);
    }
}

ExprVector legendre_map(const LagrangianSystem& sys) {
    ExprVector out;
    for (std::size_t a = 0; a < sys.n(); ++a) out.push_back(differentiate(sys.lagrangian(), velocity_name(a)));
    return out;
}

Expr energy(const LagrangianSystem& sys) {
    const ExprVector fl = legendre_map(sys);
    Expr e;
    for (std::size_t a = 0; a < sys.n(); ++a) e = e + Expr::variable(velocity_name(a)) * fl[a];
    return collect_terms(e - sys.lagrangian());
}

ExprVector theta_L(const LagrangianSystem& sys) {
    ExprVector theta(2 * sys.n());
    const ExprVector fl = legendre_map(sys);
    for (std::size_t a = 0; a < sys.n(); ++a) theta[a] = fl[a];
    return theta;
}

TwoForm omega_L(const LagrangianSystem& sys) {
    const std::size_t n = sys.n();
    const ExprVector fl = legendre_map(sys);
    TwoForm w(sys.chart());
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            w.set(a, b, differentiate(fl[a], position_name(b)) - differentiate(fl[b], position_name(a)));
        }
        for (std::size_t b = 0; b < n; ++b) w.set(a, n + b, differentiate(fl[a], velocity_name(b)));
    }
    return w;
}

Expr determinant(const std::vector<ExprVector>& m) {
    const std::size_t n = m.size();
    if (n == 0) return Expr(1);
    if (n == 1) return m[0][0];
    if (n == 2) return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    Expr det;
    for (std::size_t c = 0; c < n; ++c) {
        if (m[0][c].is_zero()) continue;
        std::vector<ExprVector> minor;
        for (std::size_t r = 1; r < n; ++r) {
            ExprVector row;
            for (std::size_t k = 0; k < n; ++k) {
                if (k != c) row.push_back(m[r][k]);
            }
            minor.push_back(std::move(row));
        }
        const Expr term = m[0][c] * determinant(minor);
        det = (c % 2 == 0) ? det + term : det - term;
    }
    return det;
}

Hessian hessian(const LagrangianSystem& sys, const ZeroTestConfig& config) {
    const std::size_t n = sys.n();
    Hessian h;
    const ExprVector fl = legendre_map(sys);
    h.matrix.assign(n, ExprVector(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) h.matrix[a][b] = differentiate(fl[a], velocity_name(b));
    }
    const Box box = sys.box_for(sys.chart());
    const PointSet probes = random_points(box, config.samples, config.seed);
    if (n <= 4) {
        const Expr det = determinant(h.matrix);
        switch (sign_pattern(det, sys.chart(), probes, config.tolerance)) {
            case SignPattern::AllZero: h.verdict = Regularity::Singular; break;
            case SignPattern::AllNonZero: {
                // A sign change means det vanishes somewhere in the (connected) box.
                const std::vector<double> d = evaluate_batch(CompiledExpr(det, sys.chart()), probes, Exec::Serial);
                const bool pos = std::any_of(d.begin(), d.end(), [](double x) { return x > 0; });
                const bool neg = std::any_of(d.begin(), d.end(), [](double x) { return x < 0; });
                h.verdict = (pos && neg) ? Regularity::Indeterminate : Regularity::Regular;
                break;
            }
            default: h.verdict = Regularity::Indeterminate; break;
        }
        return h;
    }
    // Large n: the symbolic determinant is too big, decide from numeric rank.
    const CompiledMatrix c(h.matrix, sys.chart());
    std::size_t full = 0, deficient = 0;
    for (const auto& x : probes) {
        try {
            (numeric_rank(c(x), config.tolerance) == static_cast<Eigen::Index>(n) ? full : deficient)++;
        } catch (const DomainError&) {
        }
    }
    if (full == probes.size()) {
        h.verdict = Regularity::Regular;
    } else if (deficient == probes.size()) {
        h.verdict = Regularity::Singular;
    }
    return h;
}

LegendreRank legendre_rank(const LagrangianSystem& sys, const ZeroTestConfig& config) {
    ExprVector map;
    for (std::size_t a = 0; a < sys.n(); ++a) map.push_back(Expr::variable(position_name(a)));
    for (const Expr& f : legendre_map(sys)) map.push_back(f);
    const CompiledJacobian jac(map, sys.chart());
    const std::size_t d = 2 * sys.n();
    std::vector<double> buf(d * d);
    LegendreRank out;
    out.min_rank = d;
    for (const auto& x : random_points(sys.box_for(sys.chart()), config.samples, config.seed)) {
        try {
            jac(x, buf);
        } catch (const DomainError&) {
            continue;
        }
        const Matrix m = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
            buf.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        const auto r = static_cast<std::size_t>(numeric_rank(m, config.tolerance));
        out.min_rank = std::min(out.min_rank, r);
        out.max_rank = std::max(out.max_rank, r);
        ++out.samples;
    }
    if (out.samples == 0) out.min_rank = 0;
    return out;
}

TwoForm pullback_two_form(const TwoForm& omega, const ExprVector& z, const Chart& configuration) {
    const std::size_t n = configuration.size();
    if (z.size() != n || omega.size() != 2 * n) throw DimensionMismatch("pullback along Z: dimensions do not match");
    ExprVector map;
    for (std::size_t a = 0; a < n; ++a) map.push_back(Expr::variable(configuration.name(a)));
    for (const Expr& za : z) map.push_back(za);
    return pullback(omega, map, configuration);
}

bool sode_check(const ExprVector& x, const Box& tangent_box, const ZeroTestConfig& config) {
    const std::size_t n = tangent_box.chart().dimension();
    if (x.size() != 2 * n) throw DimensionMismatch("sode check: field must have 2n components");
    for (std::size_t a = 0; a < n; ++a) {
        if (is_identically_zero(x[a] - Expr::variable(velocity_name(a)), tangent_box, config) != ZeroVerdict::Zero) {
            return false;
        }
    }
    return true;
}

}  // namespace degenlag
