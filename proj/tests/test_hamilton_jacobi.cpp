#include <cmath>

#include "degenlag/error.hpp"
#include "degenlag/hamilton_jacobi.hpp"
#include "degenlag/parser.hpp"
#include "doctest.h"

using namespace degenlag;

namespace {

struct Setup {
    PontryaginSystem ps;
    ConstraintChain sr_chain;
};

LagrangianSystem lag(std::size_t n, const char* text, Interval q_range = {}) {
    Box box(Chart::pontryagin(n));
    for (std::size_t a = 0; a < n; ++a) box.set(position_name(a), q_range);
    return LagrangianSystem(n, parse_expr(text, Chart::tangent(n)), box);
}

Setup setup(std::size_t n, const char* text, Interval q_range = {}) {
    auto ps = build_pontryagin(lag(n, text, q_range));
    auto chain = run_symbolic(skinner_rusk_system(ps));
    return {std::move(ps), std::move(chain)};
}

ExprVector exprs(std::initializer_list<const char*> texts, const Chart& chart) {
    ExprVector out;
    for (const char* t : texts) out.push_back(parse_expr(t, chart));
    return out;
}

ExprVector qx(std::initializer_list<const char*> texts, std::size_t n = 2) { return exprs(texts, Chart::configuration(n)); }
ExprVector px(std::initializer_list<const char*> texts, std::size_t n = 2) { return exprs(texts, Chart::pontryagin(n)); }

const Box q2box{Chart::configuration(2)};

// The worked example: L = q1 v2 + q2 v1, sigma = d/dq1 + d/dq2 + q2 dq1 + q1 dq2.
const char* const kExample = "q1*v2 + q2*v1";
Section example_section() { return {qx({"1", "1"}), qx({"q2", "q1"})}; }
ExprVector example_field() { return px({"v1", "v2", "1", "1", "v2", "v1"}); }

bool zero_vector(const ExprVector& v, const Box& box) {
    for (const Expr& e : v) {
        if (is_identically_zero(e, box) != ZeroVerdict::Zero) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("gamma closedness") {
    CHECK(check_gamma_closed(qx({"q2", "q1"}), q2box).verdict == Verdict::Pass);
    CHECK(check_gamma_closed(qx({"q2", "0"}), q2box).verdict == Verdict::Fail);
    CHECK(check_gamma_closed(qx({"2*q1*q2", "q1^2"}), q2box).verdict == Verdict::Pass);
}

TEST_CASE("image in W1") {
    const auto deg = lag(2, kExample);
    CHECK(check_in_W1(example_section(), deg).verdict == Verdict::Pass);
    const auto free = lag(2, "(v1^2 + v2^2)/2");
    CHECK(check_in_W1({qx({"1", "0"}), qx({"1", "0"})}, free).verdict == Verdict::Pass);
    const Condition c = check_in_W1({qx({"1", "0"}), qx({"0", "1"})}, free);
    CHECK(c.verdict == Verdict::Fail);
    CHECK(c.residual == doctest::Approx(1));
}

TEST_CASE("d(D o sigma) restricted to Q_f") {
    const Setup ex = setup(2, kExample);
    CHECK(check_dD_sigma(example_section(), ex.ps, ex.sr_chain).verdict == Verdict::Pass);
    const Setup free = setup(2, "(v1^2 + v2^2)/2");
    CHECK(check_dD_sigma({qx({"1/2", "-3/2"}), qx({"1/2", "-3/2"})}, free.ps, free.sr_chain).verdict == Verdict::Pass);
    const Setup osc = setup(1, "v1^2/2 - q1^2/2");
    const Condition c = check_dD_sigma({qx({"1"}, 1), qx({"1"}, 1)}, osc.ps, osc.sr_chain);
    CHECK(c.verdict == Verdict::Fail);
    CHECK(c.residual > 0.5);
}

TEST_CASE("Skinner-Rusk HJ report") {
    const Setup ex = setup(2, kExample);
    const HJReport r = hj_check_sr(example_section(), ex.ps, ex.sr_chain, example_field());
    CHECK(r.is_solution());
    CHECK(r.conditions.size() == 4);
    CHECK(r.find("SigmaRelated")->verdict == Verdict::Fail);
    CHECK(r.find("KernelMembership")->verdict == Verdict::Pass);

    const HJReport bad = hj_check_sr({qx({"1", "1"}), qx({"q2", "q1 + 1"})}, ex.ps, ex.sr_chain);
    CHECK(bad.find("InW1")->verdict == Verdict::Fail);
    CHECK(bad.overall() == Verdict::Fail);

    const Setup d = setup(2, "v1*q2");
    const HJReport rd = hj_check_sr({qx({"0", "0"}), qx({"q2", "0"})}, d.ps, d.sr_chain);
    CHECK(rd.find("InW1")->verdict == Verdict::Pass);
    CHECK(rd.find("InWf")->verdict == Verdict::Pass);
    CHECK(rd.find("GammaClosed")->verdict == Verdict::Fail);
    CHECK_FALSE(rd.is_solution());
    // a nonzero Z leaves W_f = {v = 0}
    const HJReport rz = hj_check_sr({qx({"1", "0"}), qx({"q2", "0"})}, d.ps, d.sr_chain);
    CHECK(rz.find("InWf")->verdict == Verdict::Fail);
}

TEST_CASE("projected field") {
    const ExprVector xs = projected_field(example_section(), example_field(), 2);
    CHECK(xs[0] == Expr(1));
    CHECK(xs[1] == Expr(1));
    const Setup ex = setup(2, kExample);
    const Section s{qx({"q1*q2", "sin(q1)"}), qx({"q2", "q1"})};
    const ExprVector ps = projected_field(s, ex.sr_chain.family->particular, 2);
    CHECK(zero_vector({ps[0] - s.Z[0], ps[1] - s.Z[1]}, q2box));
    const ExprVector zero = projected_field(example_section(), ExprVector(6), 2);
    CHECK(zero[0].is_zero());
    CHECK(zero[1].is_zero());
}

TEST_CASE("kernel membership and sigma relatedness") {
    const Setup ex = setup(2, kExample);
    const Condition k = kernel_membership(example_section(), example_field(), ex.ps, ex.sr_chain);
    CHECK(k.verdict == Verdict::Pass);
    CHECK(k.residual <= 1e-12);
    const Condition rel = sigma_relatedness(example_section(), example_field(), ex.ps, ex.sr_chain);
    CHECK(rel.verdict == Verdict::Fail);
    CHECK(rel.witness.find("(0, 0, 1, 1, 0, 0)") != std::string::npos);

    ExprVector corrupted = example_field();
    corrupted[4] = corrupted[4] + Expr(1);
    const Condition kc = kernel_membership(example_section(), corrupted, ex.ps, ex.sr_chain);
    CHECK(kc.verdict == Verdict::Fail);
    CHECK(kc.residual == doctest::Approx(1));

    // X = T sigma(X^sigma) along sigma: the particular solution with b = 0
    CHECK(sigma_relatedness(example_section(), px({"v1", "v2", "0", "0", "v2", "v1"}), ex.ps, ex.sr_chain).verdict ==
          Verdict::Pass);

    const Setup free = setup(2, "(v1^2 + v2^2)/2");
    const Section fs{qx({"1/2", "-1"}), qx({"1/2", "-1"})};
    const ExprVector x = free.sr_chain.family->particular;
    CHECK(kernel_membership(fs, x, free.ps, free.sr_chain).residual == 0.0);
    CHECK(sigma_relatedness(fs, x, free.ps, free.sr_chain).verdict == Verdict::Pass);
}

TEST_CASE("derived Hamiltonian data") {
    const Chart cq = Chart::cotangent(2);
    const HamiltonianInput a = derive_hamiltonian(lag(2, kExample));
    CHECK(a.derived);
    CHECK(a.constraints.size() == 2);
    CHECK(is_identically_zero(a.h1, Box(cq)) == ZeroVerdict::Zero);
    const HamiltonianInput b = derive_hamiltonian(lag(2, "v1*q2"));
    REQUIRE(b.constraints.size() == 2);
    CHECK(b.h1.is_zero());
    const HamiltonianInput c = derive_hamiltonian(lag(2, "(v1^2 + v2^2)/2 - q1*q2"));
    CHECK(c.constraints.empty());
    CHECK(is_identically_zero(c.h1 - parse_expr("(p1^2 + p2^2)/2 + q1*q2", cq), Box(cq)) == ZeroVerdict::Zero);
    CHECK_THROWS_AS(derive_hamiltonian(lag(2, "v1^4 + v2^2")), PreconditionFailed);
    CHECK(validate_hamiltonian(c, lag(2, "(v1^2 + v2^2)/2 - q1*q2")));
    CHECK_FALSE(validate_hamiltonian({{}, parse_expr("p1^2", cq), false}, lag(2, "(v1^2 + v2^2)/2")));
}

TEST_CASE("Hamiltonian HJ report") {
    const auto deg = lag(2, kExample);
    const HamiltonianInput ham = derive_hamiltonian(deg);
    const ConstraintChain chain = run_symbolic(hamiltonian_system(2, ham.h1, ham.constraints, deg.box()));
    const HJReport r = hj_check_hamiltonian(qx({"q2", "q1"}), ham, chain, deg.box());
    CHECK(r.is_solution());
    CHECK(r.find("SigmaRelated")->verdict == Verdict::Pass);

    const Chart cq = Chart::cotangent(2);
    const HamiltonianInput free{{}, parse_expr("(p1^2 + p2^2)/2", cq), false};
    const Box box(Chart::pontryagin(2));
    const ConstraintChain fchain = run_symbolic(hamiltonian_system(2, free.h1, {}, box));
    const HJReport rf = hj_check_hamiltonian(qx({"3/4", "-1/2"}), free, fchain, box);
    CHECK(rf.is_solution());
    CHECK(rf.find("SigmaRelated")->residual <= 1e-9);

    const Chart c1 = Chart::cotangent(1);
    const HamiltonianInput osc{{}, parse_expr("(p1^2 + q1^2)/2", c1), false};
    const Box box1(Chart::pontryagin(1));
    const ConstraintChain ochain = run_symbolic(hamiltonian_system(1, osc.h1, {}, box1));
    const HJReport ro = hj_check_hamiltonian(qx({"1"}, 1), osc, ochain, box1);
    CHECK(ro.find("DCircGammaFlat")->verdict == Verdict::Fail);
    CHECK_FALSE(ro.is_solution());
}

TEST_CASE("Lagrangian HJ report") {
    const auto deg = lag(2, kExample);
    const ConstraintChain chain = run_symbolic(lagrangian_system(deg));
    CHECK(hj_check_lagrangian(qx({"q1^2*q2 - 3", "q2^3 + q1"}), deg, chain).is_solution());
    const ExprVector xi = exprs({"v1", "v2", "1", "1"}, Chart::tangent(2));
    const HJReport r = hj_check_lagrangian(qx({"1", "1"}), deg, chain, xi);
    CHECK(r.is_solution());
    CHECK(r.find("ZRelated")->verdict == Verdict::Fail);
    CHECK(r.find("ZRelated")->witness.find("(0, 0, 1, 1)") != std::string::npos);
    CHECK(r.find("KernelMembership")->verdict == Verdict::Pass);

    const auto free = lag(2, "(v1^2 + v2^2)/2");
    const ConstraintChain fchain = run_symbolic(lagrangian_system(free));
    const HJReport rf = hj_check_lagrangian(qx({"1", "-1/3"}), free, fchain);
    CHECK(rf.is_solution());
    CHECK(rf.find("ZRelated")->verdict == Verdict::Pass);
}

TEST_CASE("SODE point") {
    const Chart tq = Chart::tangent(2);
    const auto free = lag(2, "(v1^2 + v2^2)/2");
    const std::vector<double> qp{0.5, -1, 0.25, 1.5};
    const std::vector<std::vector<double>> seeds{{0, 0}, {1, 1}, {-1, 0.5}};
    const auto pt = sode_point(exprs({"v1", "v2", "0", "0"}, tq), free, qp, seeds);
    CHECK(pt == std::vector<double>{0.5, -1, 0.25, 1.5});

    const auto deg = lag(2, kExample);
    const std::vector<double> m{0.3, 0.7, 0.7, 0.3};
    CHECK_THROWS_AS(sode_point(exprs({"v1", "v2", "1", "1"}, tq), deg, m, seeds), PreconditionFailed);
    const auto z = sode_point(ExprVector(4), deg, m, seeds);
    CHECK(z == std::vector<double>{0.3, 0.7, 0, 0});
    const auto c = sode_point(exprs({"1", "1", "0", "0"}, tq), deg, m, seeds);
    CHECK(c == std::vector<double>{0.3, 0.7, 1, 1});
    // p off the image of FL: no fibre point
    CHECK_THROWS_AS(sode_point(ExprVector(4), deg, std::vector<double>{0.3, 0.7, 0, 0}, seeds), PreconditionFailed);
}

TEST_CASE("section from a Hamiltonian solution") {
    const Setup ex = setup(2, kExample);
    const Chart cq = Chart::cotangent(2);
    const SectionFromGamma s = build_section_from_gamma(qx({"q2", "q1"}), exprs({"1", "1", "q2", "q1"}, cq), ex.ps);
    CHECK(s.section.Z[0] == Expr(1));
    CHECK(s.section.Z[1] == Expr(1));
    CHECK(s.verdict == Verdict::Pass);

    const Setup free = setup(1, "v1^2/2");
    const Chart c1 = Chart::cotangent(1);
    const SectionFromGamma f = build_section_from_gamma(qx({"3/2"}, 1), exprs({"p1", "0"}, c1), free.ps);
    CHECK(f.section.Z[0] == Expr(Rational(3, 2)));
    CHECK(f.verdict == Verdict::Pass);

    // gamma = dW with W = q^2/2 is not a solution for h = p^2/2: the residual check reports it
    const SectionFromGamma w = build_section_from_gamma(qx({"q1"}, 1), exprs({"p1", "0"}, c1), free.ps);
    CHECK(w.section.Z[0] == Expr::variable("q1"));
    CHECK(w.verdict == Verdict::Fail);

    const Setup osc = setup(1, "v1^2/2 - q1^2/2", Interval{-1, 1});
    const SectionFromGamma o = build_section_from_gamma(qx({"sqrt(2 - q1^2)"}, 1), exprs({"p1", "-q1"}, c1), osc.ps);
    CHECK(o.verdict == Verdict::Pass);
    CHECK(o.residual <= 1e-12);
}

TEST_CASE("projected solutions") {
    const Setup ex = setup(2, kExample);
    const ExprVector x1 = project_solution(example_field(), Target::Lagrangian, ex.ps);
    CHECK(x1 == exprs({"v1", "v2", "1", "1"}, Chart::tangent(2)));
    const ExprVector x2 = project_solution(example_field(), Target::Hamiltonian, ex.ps);
    CHECK(x2 == px({"v1", "v2", "v2", "v1"}));
    const HamiltonianInput ham = derive_hamiltonian(ex.ps.lagrangian);
    const auto pts = Variety(ex.ps.box(), ex.sr_chain.final_constraints()).sample(50, 1).points;
    CHECK(hamiltonian_residual(ham, 2, x2, pts) <= 1e-9);

    const Setup free = setup(2, "(v1^2 + v2^2)/2 - q1*q2");
    const ExprVector f1 = project_solution(free.sr_chain.family->particular, Target::Lagrangian, free.ps);
    PointSet qv;
    for (const auto& p : random_points(free.ps.box(), 50, 3)) qv.emplace_back(p.begin(), p.begin() + 4);
    CHECK(lagrangian_residual(free.ps.lagrangian, f1, qv) <= 1e-9);

    ExprVector bent = example_field();
    bent[4] = bent[4] + Expr(1);
    CHECK_THROWS_AS(project_solution(bent, Target::Lagrangian, ex.ps), PreconditionFailed);
}

TEST_CASE("property: condition (iv) and kernel membership agree; regular dichotomy") {
    struct Case {
        std::size_t n;
        const char* lagrangian;
        Section section;
        std::optional<ExprVector> field;
        bool regular;
        Interval q_range;
    };
    const std::vector<Case> cases = {
        {2, kExample, example_section(), example_field(), false, {}},
        {2, kExample, {qx({"q1", "q2^2"}), qx({"q2", "q1"})}, std::nullopt, false, {}},
        {2, "(v1^2 + v2^2)/2", {qx({"1/2", "-1"}), qx({"1/2", "-1"})}, std::nullopt, true, {}},
        {2, "(v1^2 + v2^2)/2", {qx({"q1", "0"}), qx({"q1", "0"})}, std::nullopt, true, {}},
        {1, "v1^2/2 - q1^2/2", {qx({"1"}, 1), qx({"1"}, 1)}, std::nullopt, true, {}},
        {1, "v1^2/2 - q1^2/2", {qx({"sqrt(2 - q1^2)"}, 1), qx({"sqrt(2 - q1^2)"}, 1)}, std::nullopt, true, {-1, 1}},
        {2, "v1*q2", {qx({"0", "0"}), qx({"q2", "0"})}, std::nullopt, false, {}},
    };
    for (const auto& c : cases) {
        const Setup s = setup(c.n, c.lagrangian, c.q_range);
        const HJReport r = hj_check_sr(c.section, s.ps, s.sr_chain, c.field);
        const bool iv = r.find("DCircSigmaFlat")->verdict == Verdict::Pass;
        const bool kernel = r.find("KernelMembership")->verdict == Verdict::Pass;
        CHECK(iv == kernel);
        if (c.regular) CHECK(iv == (r.find("SigmaRelated")->verdict == Verdict::Pass));
        // projection coherence
        if (r.find("InW1")->verdict == Verdict::Pass && s.sr_chain.family) {
            const ExprVector xs = projected_field(c.section, s.sr_chain.family->particular, c.n);
            ExprVector diff;
            for (std::size_t a = 0; a < c.n; ++a) diff.push_back(xs[a] - c.section.Z[a]);
            CHECK(zero_vector(diff, s.ps.box().rebased(Chart::configuration(c.n))));
        }
        // SODE coherence
        if (s.sr_chain.family) {
            const ExprVector x1 = project_solution(s.sr_chain.family->particular, Target::Lagrangian, s.ps, {}, s.sr_chain.final_constraints());
            CHECK(sode_check(x1, s.ps.lagrangian.box_for(s.ps.lagrangian.chart())));
        }
    }
}

TEST_CASE("property: a passing Hamiltonian check implies relatedness") {
    struct Case {
        std::size_t n;
        const char* h;
        ExprVector gamma;
    };
    const std::vector<Case> cases = {
        {2, "(p1^2 + p2^2)/2", qx({"1", "-1/2"})},
        {2, "(p1^2 + p2^2)/2 + q1", qx({"1", "-1/2"})},
        {1, "(p1^2 + q1^2)/2", qx({"sqrt(3 - q1^2)"}, 1)},
        {2, "p1*p2", qx({"q2", "q1"})},
    };
    for (const auto& c : cases) {
        Box box(Chart::pontryagin(c.n));
        for (std::size_t a = 0; a < c.n; ++a) box.set(position_name(a), {-1, 1});
        const HamiltonianInput ham{{}, parse_expr(c.h, Chart::cotangent(c.n)), false};
        const ConstraintChain chain = run_symbolic(hamiltonian_system(c.n, ham.h1, {}, box));
        const HJReport r = hj_check_hamiltonian(c.gamma, ham, chain, box);
        if (r.is_solution()) CHECK(r.find("SigmaRelated")->residual <= 1e-9);
    }
}
