#include "degenlag/error.hpp"
#include "degenlag/linalg.hpp"
#include "degenlag/mechanics.hpp"
#include "degenlag/parser.hpp"
#include "doctest.h"

using namespace degenlag;

namespace {

LagrangianSystem lag(std::size_t n, const char* text) { return LagrangianSystem(n, parse_expr(text, Chart::tangent(n))); }

bool zero(const Expr& e, const LagrangianSystem& s) {
    return is_identically_zero(e, s.box_for(s.chart())) == ZeroVerdict::Zero;
}

Expr var(const std::string& n) { return Expr::variable(n); }

}  // namespace

TEST_CASE("legendre map") {
    const auto s = lag(2, "q1*v2 + q2*v1");
    const ExprVector fl = legendre_map(s);
    CHECK(fl[0] == var("q2"));
    CHECK(fl[1] == var("q1"));

    const ExprVector fl2 = legendre_map(lag(2, "v1*q2"));
    CHECK(fl2[0] == var("q2"));
    CHECK(fl2[1].is_zero());

    const auto free = lag(2, "(v1^2 + v2^2)/2");
    const ExprVector fl3 = legendre_map(free);
    CHECK(zero(fl3[0] - var("v1"), free));
    CHECK(zero(fl3[1] - var("v2"), free));
}

TEST_CASE("energy") {
    const auto s = lag(2, "q1*v2 + q2*v1");
    CHECK(zero(energy(s), s));
    const auto free = lag(2, "(v1^2 + v2^2)/2");
    CHECK(zero(energy(free) - free.lagrangian(), free));
    const auto d = lag(2, "v1*q2");
    CHECK(zero(energy(d), d));
}

TEST_CASE("omega_L") {
    const auto s = lag(2, "q1*v2 + q2*v1");
    const TwoForm w = omega_L(s);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) CHECK(zero(w(i, j), s));
    }

    const auto free = lag(2, "(v1^2 + v2^2)/2");
    const TwoForm wf = omega_L(free);
    CHECK(wf(0, 2) == Expr(1));
    CHECK(wf(1, 3) == Expr(1));
    CHECK(wf(0, 3).is_zero());
    CHECK(wf(0, 1).is_zero());
    CHECK(wf(2, 3).is_zero());

    const auto d = lag(2, "v1*q2");
    const TwoForm wd = omega_L(d);
    CHECK(wd(0, 1) == Expr(1));
    CHECK(wd(1, 0) == Expr(-1));
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            if ((i == 0 && j == 1) || (i == 1 && j == 0)) continue;
            CHECK(wd(i, j).is_zero());
        }
    }
}

TEST_CASE("hessian and regularity verdicts") {
    const Hessian h1 = hessian(lag(2, "q1*v2 + q2*v1"));
    CHECK(h1.verdict == Regularity::Singular);
    for (const auto& row : h1.matrix) {
        for (const auto& e : row) CHECK(e.is_zero());
    }
    const Hessian h2 = hessian(lag(2, "(v1^2 + v2^2)/2"));
    CHECK(h2.verdict == Regularity::Regular);
    CHECK(h2.matrix[0][0] == Expr(1));
    CHECK(h2.matrix[0][1].is_zero());
    CHECK(hessian(lag(2, "v1*q2")).verdict == Regularity::Singular);
    // det = q1 changes sign on the default box
    CHECK(hessian(lag(1, "q1*v1^2/2")).verdict == Regularity::Indeterminate);
    // large n goes through the numeric path
    CHECK(hessian(lag(5, "(v1^2 + v2^2 + v3^2 + v4^2 + v5^2)/2")).verdict == Regularity::Regular);
    CHECK(hessian(lag(5, "(v1^2 + v2^2 + v3^2 + v4^2)/2 + q5*v5")).verdict == Regularity::Singular);
}

TEST_CASE("pullback along Z") {
    const Chart q = Chart::configuration(2);
    const auto s = lag(2, "q1*v2 + q2*v1");
    const TwoForm p1 = pullback_two_form(omega_L(s), {var("q1") * var("q2"), sin(var("q1"))}, q);
    CHECK(p1(0, 1).is_zero());

    const auto free = lag(2, "(v1^2 + v2^2)/2");
    CHECK(pullback_two_form(omega_L(free), {Expr(), Expr()}, q)(0, 1).is_zero());

    // For dq^A ^ dv^A the pullback along v = Z(q) has dq1^dq2 coefficient dZ1/dq2 - dZ2/dq1.
    const ExprVector zs[] = {{var("q2"), var("q1")}, {Expr(), var("q1")}, {var("q2") * var("q2"), var("q1") * var("q2")}};
    for (const auto& z : zs) {
        const Expr oracle = differentiate(z[0], "q2") - differentiate(z[1], "q1");
        CHECK(zero(pullback_two_form(omega_L(free), z, q)(0, 1) - oracle, free));
    }
    CHECK(pullback_two_form(omega_L(free), zs[1], q)(0, 1) == Expr(-1));
    CHECK_THROWS_AS(pullback_two_form(omega_L(free), {Expr()}, q), DimensionMismatch);
}

TEST_CASE("sode check") {
    const Box box(Chart::tangent(2));
    CHECK(sode_check({var("v1"), var("v2"), Expr(1), Expr(1)}, box));
    CHECK_FALSE(sode_check({Expr(1), Expr(), Expr(), Expr()}, box));
    const Box box1(Chart::tangent(1));
    CHECK(sode_check({var("v1"), -var("q1")}, box1));
}

TEST_CASE("property: omega_L is antisymmetric and equals -d theta_L") {
    const char* samples[] = {"q1*v2 + q2*v1", "v1*q2", "(v1^2 + v2^2)/2 - q1^2*q2", "sin(q1)*v1*v2 + exp(q2)*v2^2",
                             "q1*q2*v1^3 + v2*v1"};
    for (const char* text : samples) {
        const auto s = lag(2, text);
        const TwoForm w = omega_L(s);
        const TwoForm dtheta = exterior_derivative(theta_L(s), s.chart());
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(w(i, i).is_zero());
            for (std::size_t j = 0; j < 4; ++j) {
                CHECK(w(i, j) == -w(j, i));
                CHECK(zero(w(i, j) + dtheta(i, j), s));
            }
        }
    }
}

TEST_CASE("property: regular L gives full-rank omega_L at probes") {
    const char* samples[] = {"(v1^2 + v2^2)/2", "(v1^2 + v2^2)/2 - q1^2*q2", "exp(q1)*v1^2 + v2^2 + q1*v2"};
    for (const char* text : samples) {
        const auto s = lag(2, text);
        REQUIRE(hessian(s).verdict == Regularity::Regular);
        const CompiledMatrix m(omega_L(s).matrix(), s.chart());
        for (const auto& x : random_points(s.box_for(s.chart()), 50, 8)) CHECK(numeric_rank(m(x), 1e-9) == 4);
    }
}

TEST_CASE("property: energy vanishes for L homogeneous of degree one in v") {
    const char* samples[] = {"q1*v2 + q2*v1", "v1*q2", "sin(q1)*v1 - exp(q2)*v2", "sqrt(v1^2 + v2^2 + 1) * 0 + q1^3*v2"};
    for (const char* text : samples) {
        const auto s = lag(2, text);
        CHECK(zero(energy(s), s));
    }
}

TEST_CASE("rank of the Legendre map") {
    // worked example: FL = (q2, q1) has rank n (only the q directions survive)
    const LagrangianSystem ex(2, parse_expr("q1*v2 + q2*v1", Chart::tangent(2)));
    const LegendreRank a = legendre_rank(ex);
    CHECK(a.constant());
    CHECK(a.min_rank == 2);
    // regular: full rank 2n
    const LagrangianSystem reg(2, parse_expr("(v1^2 + v2^2)/2", Chart::tangent(2)));
    CHECK(legendre_rank(reg).min_rank == 4);
    // L = v1^3/3: the Hessian v1 changes rank only on v1 = 0, so probes see rank 2
    const LagrangianSystem cubic(1, parse_expr("v1^3/3", Chart::tangent(1)));
    CHECK(legendre_rank(cubic).max_rank == 2);
}
