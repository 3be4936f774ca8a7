#include <cmath>

#include "degenlag/error.hpp"
#include "degenlag/parser.hpp"
#include "degenlag/pontryagin.hpp"
#include "degenlag/variety.hpp"
#include "doctest.h"

using namespace degenlag;

namespace {

PontryaginSystem sr(std::size_t n, const char* text) {
    return build_pontryagin(LagrangianSystem(n, parse_expr(text, Chart::tangent(n))));
}

Expr e(const char* text, std::size_t n) { return parse_expr(text, Chart::pontryagin(n)); }

bool same(const Expr& a, const Expr& b, const PontryaginSystem& ps) {
    return is_identically_zero(a - b, ps.box()) == ZeroVerdict::Zero;
}

// ||Omega^T x - dD||_inf at a point, computed numerically.
double contraction_residual(const PontryaginSystem& ps, const ExprVector& x, std::span<const double> pt) {
    const Matrix m = CompiledMatrix(ps.omega.matrix(), ps.chart)(pt);
    const std::vector<double> xv = CompiledVector(x, ps.chart)(pt);
    const std::vector<double> dd = CompiledVector(ps.dD, ps.chart)(pt);
    const Vector r = m.transpose() * Eigen::Map<const Vector>(xv.data(), static_cast<Eigen::Index>(xv.size())) -
                     Eigen::Map<const Vector>(dd.data(), static_cast<Eigen::Index>(dd.size()));
    return r.cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("build_pontryagin") {
    const auto ps = sr(2, "q1*v2 + q2*v1");
    const char* expected[] = {"-v2", "-v1", "p1 - q2", "p2 - q1", "v1", "v2"};
    for (std::size_t i = 0; i < 6; ++i) CHECK(same(ps.dD[i], e(expected[i], 2), ps));
    CHECK(ps.omega.is_constant());
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = 0; j < 6; ++j) {
            const bool block = (i < 2 && j == i + 4);
            CHECK(ps.omega(i, j) == (block ? Expr(1) : (j < 2 && i == j + 4) ? Expr(-1) : Expr()));
        }
    }

    const auto zero = sr(2, "0");
    CHECK(same(zero.D, e("v1*p1 + v2*p2", 2), zero));
    const char* zero_dd[] = {"0", "0", "p1", "p2", "v1", "v2"};
    for (std::size_t i = 0; i < 6; ++i) CHECK(same(zero.dD[i], e(zero_dd[i], 2), zero));

    const auto free = sr(2, "(v1^2 + v2^2)/2");
    CHECK(same(free.dD[2], e("p1 - v1", 2), free));
    CHECK(same(free.dD[3], e("p2 - v2", 2), free));
}

TEST_CASE("primary constraints") {
    const auto ps = sr(2, "q1*v2 + q2*v1");
    const ExprVector c = primary_constraints(ps);
    CHECK(same(c[0], e("p1 - q2", 2), ps));
    CHECK(same(c[1], e("p2 - q1", 2), ps));
    const auto d = sr(2, "v1*q2");
    CHECK(same(primary_constraints(d)[0], e("p1 - q2", 2), d));
    CHECK(same(primary_constraints(d)[1], e("p2", 2), d));
    const auto free = sr(2, "(v1^2 + v2^2)/2");
    CHECK(same(primary_constraints(free)[1], e("p2 - v2", 2), free));
}

TEST_CASE("solution family on W1") {
    const auto ps = sr(2, "q1*v2 + q2*v1");
    const SolutionFamily f = solution_family_on_W1(ps);
    const char* expected[] = {"v1", "v2", "0", "0", "v2", "v1"};
    for (std::size_t i = 0; i < 6; ++i) CHECK(same(f.particular[i], e(expected[i], 2), ps));
    REQUIRE(f.null_basis.size() == 2);
    CHECK(f.null_basis[0][2] == Expr(1));
    CHECK(f.null_basis[1][3] == Expr(1));

    const auto osc = sr(1, "v1^2/2 - q1^2/2");
    const SolutionFamily g = solution_family_on_W1(osc);
    CHECK(same(g.particular[0], e("v1", 1), osc));
    CHECK(g.particular[1].is_zero());
    CHECK(same(g.particular[2], e("-q1", 1), osc));
}

TEST_CASE("regular b") {
    const auto osc = sr(1, "v1^2/2 - q1^2/2");
    CHECK(same(regular_b(osc)[0], e("-q1", 1), osc));
    const auto free = sr(2, "(v1^2 + v2^2)/2");
    for (const Expr& b : regular_b(free)) CHECK(same(b, Expr(), free));
    const auto pot = sr(1, "v1^2/2 - q1^4/4 - sin(q1)");
    CHECK(same(regular_b(pot)[0], e("-q1^3 - cos(q1)", 1), pot));
    // velocity-dependent coupling: L = v1^2 + q1 v1 v2 + v2^2
    const auto coupled = sr(2, "v1^2/2 + v2^2/2 + q2*v1 + q1^2*v2");
    const ExprVector b = regular_b(coupled);
    const Box box = coupled.box();
    for (const auto& x : random_points(box, 10, 3)) {
        const std::vector<double> qv(x.begin(), x.begin() + 4);
        const std::vector<double> num = regular_b_at(coupled, qv);
        for (std::size_t a = 0; a < 2; ++a) CHECK(CompiledExpr(b[a], coupled.chart)(x) == doctest::Approx(num[a]));
    }
    CHECK_THROWS_AS(regular_b(sr(2, "q1*v2 + q2*v1")), SingularHessian);
    CHECK_THROWS_AS(regular_b_at(sr(2, "v1*q2"), std::vector<double>{0.1, 0.2, 0.3, 0.4}), SingularHessian);
}

TEST_CASE("property: contraction identity on W1 and exact off-W1 defect") {
    const char* lagrangians[] = {"q1*v2 + q2*v1", "v1*q2", "(v1^2 + v2^2)/2 - q1*q2", "sin(q1)*v2^2 + v1*v2"};
    for (const char* text : lagrangians) {
        const auto ps = sr(2, text);
        const SolutionFamily fam = solution_family_on_W1(ps);
        const Variety w1(ps.box(), primary_constraints(ps));
        const auto pts = w1.sample(100, 17).points;
        REQUIRE(pts.size() == 100);
        const ExprVector shifted = fam.member({parse_expr("q1*v2", ps.chart), Expr(3)});
        for (const auto& x : pts) {
            CHECK(contraction_residual(ps, fam.particular, x) <= 1e-9);
            CHECK(contraction_residual(ps, shifted, x) <= 1e-9);
        }
        // v-rows of Omega^T X - dD are exactly minus the primary constraints.
        const ExprVector defect = ps.omega.contract(fam.particular);
        const ExprVector prim = primary_constraints(ps);
        for (std::size_t a = 0; a < 2; ++a) CHECK(same(defect[2 + a] - ps.dD[2 + a], -prim[a], ps));
        // null directions are annihilated structurally
        for (const auto& nv : fam.null_basis) {
            for (const Expr& c : ps.omega.contract(nv)) CHECK(c.is_zero());
        }
    }
}
