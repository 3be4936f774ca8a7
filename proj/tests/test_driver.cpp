#include <string>

#include "degenlag/driver.hpp"
#include "degenlag/parser.hpp"
#include "doctest.h"

using namespace degenlag;

namespace {

std::string doc(const std::string& body) {
    return R"({"schema": "degenlag/1", "dim": 2, "lagrangian": "q1*v2 + q2*v1")" + body + "}";
}

std::string error_path(const std::string& text) {
    try {
        parse_problem(text);
    } catch (const InputError& e) {
        return e.path();
    }
    return "<no error>";
}

const char* const kWorked = R"({
  "schema": "degenlag/1", "dim": 2, "lagrangian": "q1*v2 + q2*v1",
  "sections": {
    "Z11": {"Z": ["1", "1"], "gamma": ["q2", "q1"], "X": ["v1", "v2", "1", "1", "v2", "v1"]},
    "free": {"Z": ["q1", "q2^2"]},
    "shifted": {"Z": ["1", "1"], "gamma": ["q2", "q1 + 1"]}
  }
})";

}  // namespace

TEST_CASE("problem defaults") {
    const Problem p = parse_problem(doc(""));
    CHECK(p.n == 2);
    CHECK(p.probes == 100);
    CHECK(p.seed == 42);
    CHECK(p.box[0].lo == -2.0);
    CHECK(p.box[5].hi == 2.0);
    CHECK(p.sections.empty());
    CHECK_FALSE(p.hamiltonian);
    CHECK_FALSE(p.simulate);
}

TEST_CASE("gamma defaults to FL o Z") {
    const Problem p = parse_problem(kWorked);
    const SectionSpec& s = p.section("free");
    CHECK(s.gamma_from_legendre);
    // FL = (q2, q1) does not depend on v
    CHECK(s.section.gamma[0] == Expr::variable("q2"));
    CHECK(s.section.gamma[1] == Expr::variable("q1"));
    const Problem fp = parse_problem(R"({"schema": "degenlag/1", "dim": 1, "lagrangian": "v1^2/2",
                                         "sections": {"s": {"Z": ["q1^2"]}}})");
    CHECK(fp.section("s").section.gamma[0] == parse_expr("q1^2", Chart::configuration(1)));
}

TEST_CASE("schema violations name the field") {
    CHECK(error_path("{") == "");
    CHECK(error_path(R"({"dim": 2, "lagrangian": "v1"})") == "schema");
    CHECK(error_path(R"({"schema": "degenlag/2", "dim": 2, "lagrangian": "v1"})") == "schema");
    CHECK(error_path(R"({"schema": "degenlag/1", "lagrangian": "v1"})") == "dim");
    CHECK(error_path(R"({"schema": "degenlag/1", "dim": -1, "lagrangian": "v1"})") == "dim");
    CHECK(error_path(R"({"schema": "degenlag/1", "dim": 1, "lagrangian": "q1*"})") == "lagrangian");
    CHECK(error_path(R"({"schema": "degenlag/1", "dim": 1, "lagrangian": "p1"})") == "lagrangian");
    CHECK(error_path(doc(R"(, "extra": 1)")) == "extra");
    CHECK(error_path(doc(R"(, "box": {"x9": [0, 1]})")) == "box.x9");
    CHECK(error_path(doc(R"(, "box": {"q1": [1, 0]})")) == "box.q1");
    CHECK(error_path(doc(R"(, "probes": {"count": "many"})")) == "probes.count");
    CHECK(error_path(doc(R"(, "sections": {"a": {"Z": ["1"]}})")) == "sections.a.Z");
    CHECK(error_path(doc(R"(, "sections": {"a": {"Z": ["1", "v1"]}})")) == "sections.a.Z[1]");
    CHECK(error_path(doc(R"(, "sections": {"a": {"Z": ["1", "1"], "X": ["1"]}})")) == "sections.a.X");
    CHECK(error_path(doc(R"(, "hamiltonian": {"constraints": []})")) == "hamiltonian.h1");
    CHECK(error_path(doc(R"(, "simulate": {"section": "none", "q0": [0, 0], "t_end": 1})")) == "simulate.section");
    try {
        parse_problem(doc(R"(, "sections": {"a": {"Z": ["1", "1"], "gamma": ["q2", "q1 +* 2"]}})"));
        FAIL("expected an InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("sections.a.gamma[1]: syntax error at position 4") != std::string::npos);
    }
}

TEST_CASE("command verdicts equal library verdicts") {
    const Problem p = parse_problem(kWorked);
    const PontryaginSystem ps = build_pontryagin(p.system());
    GnhConfig g;
    g.seed = p.seed;
    const ConstraintChain chain = run_symbolic(skinner_rusk_system(ps), g);
    HJConfig h;
    h.probes = p.probes;
    h.seed = p.seed;
    h.zero.seed = p.seed;
    for (const auto& s : p.sections) {
        const HJReport lib = hj_check_sr(s.section, ps, chain, s.x, h);
        const CommandResult cmd = run_hj_check(p, s.name, Setting::SkinnerRusk);
        CHECK(cmd.json["solution"] == lib.is_solution());
        REQUIRE(cmd.json["conditions"].size() == lib.conditions.size());
        for (std::size_t i = 0; i < lib.conditions.size(); ++i) {
            CHECK(cmd.json["conditions"][i]["verdict"] == to_string(lib.conditions[i].verdict));
        }
        for (std::size_t i = 0; i < lib.diagnostics.size(); ++i) {
            CHECK(cmd.json["diagnostics"][i]["verdict"] == to_string(lib.diagnostics[i].verdict));
        }
    }
    const CommandResult c = run_chain(p, Setting::SkinnerRusk);
    CHECK(c.json["status"] == chain.status.to_string());
    CHECK(c.exit_code == kPass);
}

TEST_CASE("identical input gives identical JSON") {
    const Problem p = parse_problem(kWorked);
    CHECK(run_chain(p, Setting::SkinnerRusk).json.dump() == run_chain(p, Setting::SkinnerRusk).json.dump());
    CHECK(run_hj_check(p, "Z11", Setting::SkinnerRusk).json.dump() ==
          run_hj_check(p, "Z11", Setting::SkinnerRusk).json.dump());
    CHECK(run_report(p, ".", "t0").json.dump() == run_report(p, ".", "t1").json.dump());
}

TEST_CASE("exit codes") {
    CHECK(combine_exit(kPass, kIndeterminate) == kIndeterminate);
    CHECK(combine_exit(kIndeterminate, kFail) == kFail);
    CHECK(combine_exit(kFail, kInputError) == kInputError);
    const Problem p = parse_problem(kWorked);
    CHECK(run_hj_check(p, "Z11", Setting::SkinnerRusk).exit_code == kPass);
    CHECK(run_hj_check(p, "free", Setting::SkinnerRusk).exit_code == kPass);
    CHECK(run_hj_check(p, "shifted", Setting::SkinnerRusk).exit_code == kFail);
    const Problem empty = parse_problem(R"({"schema": "degenlag/1", "dim": 1, "lagrangian": "q1"})");
    CHECK(run_chain(empty, Setting::SkinnerRusk).exit_code == kFail);
    const Problem indet = parse_problem(R"({"schema": "degenlag/1", "dim": 1, "lagrangian": "q1*v1^2/2"})");
    CHECK(run_analyze(indet).exit_code == kIndeterminate);
    CHECK_THROWS_AS(parse_setting("xyz"), InputError);
}

TEST_CASE("Hamiltonian input from the file is validated") {
    const Problem good = parse_problem(doc(R"(, "hamiltonian": {"h1": "0", "constraints": ["p1 - q2", "p2 - q1"]})"));
    CHECK(hamiltonian_input(good).constraints.size() == 2);
    const Problem bad = parse_problem(doc(R"(, "hamiltonian": {"h1": "p1", "constraints": ["p1 - q2", "p2 - q1"]})"));
    CHECK_THROWS_AS(hamiltonian_input(bad), InputError);
    const Problem derived = parse_problem(doc(""));
    CHECK(hamiltonian_input(derived).derived);
}
