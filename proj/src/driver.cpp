#include "degenlag/driver.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "degenlag/dynamics.hpp"
#include "degenlag/gnh.hpp"
#include "degenlag/parser.hpp"

namespace degenlag {

namespace {

using ojson = nlohmann::ordered_json;

GnhConfig gnh_config(const Problem& p) {
    GnhConfig c;
    c.seed = p.seed;
    return c;
}

HJConfig hj_config(const Problem& p) {
    HJConfig c;
    c.probes = p.probes;
    c.seed = p.seed;
    c.zero.seed = p.seed;
    return c;
}

ZeroTestConfig zero_config(const Problem& p) {
    ZeroTestConfig c;
    c.seed = p.seed;
    return c;
}

std::string join(const ExprVector& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].to_string();
    return out;
}

ojson strings(const ExprVector& v) {
    ojson a = ojson::array();
    for (const Expr& e : v) a.push_back(e.to_string());
    return a;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

const char* regularity_name(Regularity r) {
    switch (r) {
        case Regularity::Regular: return "regular";
        case Regularity::Singular: return "singular";
        default: return "indeterminate";
    }
}

const char* kind_name(ChainStatus::Kind k) {
    switch (k) {
        case ChainStatus::Kind::Stabilized: return "stabilized";
        case ChainStatus::Kind::Empty: return "empty";
        default: return "budget";
    }
}

int exit_for(Verdict v) {
    switch (v) {
        case Verdict::Pass: return kPass;
        case Verdict::Fail: return kFail;
        default: return kIndeterminate;
    }
}

int exit_for(const ChainStatus& s) {
    switch (s.kind) {
        case ChainStatus::Kind::Stabilized: return kPass;
        case ChainStatus::Kind::Empty: return kFail;
        default: return kIndeterminate;
    }
}

ConstraintChain chain_for(const Problem& p, Setting setting) {
    const LagrangianSystem sys = p.system();
    switch (setting) {
        case Setting::SkinnerRusk: return run_symbolic(skinner_rusk_system(build_pontryagin(sys)), gnh_config(p));
        case Setting::Lagrangian: return run_symbolic(lagrangian_system(sys), gnh_config(p));
        default: {
            const HamiltonianInput ham = hamiltonian_input(p);
            return run_symbolic(hamiltonian_system(p.n, ham.h1, ham.constraints, p.box), gnh_config(p));
        }
    }
}

ojson condition_json(const Condition& c) {
    ojson j;
    j["id"] = c.id;
    j["verdict"] = to_string(c.verdict);
    j["residual"] = c.residual;
    j["witness"] = c.witness;
    return j;
}

void condition_line(std::ostringstream& os, const Condition& c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "  %-18s %-13s residual %s", c.id.c_str(), to_string(c.verdict),
                  format_double(c.residual).c_str());
    os << buf;
    if (!c.witness.empty()) os << "  [" << c.witness << "]";
    os << '\n';
}

// Exit code of an exception escaping a command.
int exit_for_exception(const std::exception& e) {
    if (dynamic_cast<const NonConstantRank*>(&e) || dynamic_cast<const IndeterminateZeroTest*>(&e)) {
        return kIndeterminate;
    }
    return kInputError;
}

template <class F>
CommandResult guarded(F&& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        CommandResult r;
        r.exit_code = exit_for_exception(e);
        r.text = std::string("error: ") + e.what() + "\n";
        r.json["error"] = e.what();
        r.json["exit_code"] = r.exit_code;
        return r;
    }
}

}  // namespace

Setting parse_setting(const std::string& text) {
    if (text == "sr") return Setting::SkinnerRusk;
    if (text == "lag") return Setting::Lagrangian;
    if (text == "ham") return Setting::Hamiltonian;
    throw InputError("--setting", "expected sr, lag or ham");
}

const char* to_string(Setting s) {
    switch (s) {
        case Setting::SkinnerRusk: return "sr";
        case Setting::Lagrangian: return "lag";
        default: return "ham";
    }
}

int combine_exit(int a, int b) {
    auto rank = [](int c) { return c == kInputError ? 3 : c == kFail ? 2 : c == kIndeterminate ? 1 : 0; };
    return rank(a) >= rank(b) ? a : b;
}

HamiltonianInput hamiltonian_input(const Problem& p) {
    const LagrangianSystem sys = p.system();
    if (!p.hamiltonian) return derive_hamiltonian(sys, zero_config(p));
    HamiltonianInput ham{p.hamiltonian->constraints, p.hamiltonian->h1, false};
    if (!validate_hamiltonian(ham, sys, zero_config(p))) {
        throw InputError("hamiltonian", "h1 o FL - E_L does not vanish, or FL does not map into the constraints");
    }
    return ham;
}

CommandResult run_analyze(const Problem& p) {
    const LagrangianSystem sys = p.system();
    const ExprVector fl = legendre_map(sys);
    const Expr e = energy(sys);
    const TwoForm w = omega_L(sys);
    const Hessian h = hessian(sys, zero_config(p));

    CommandResult r;
    std::ostringstream os;
    os << "L = " << sys.lagrangian().to_string() << '\n';
    os << "FL = (" << join(fl) << ")\n";
    os << "E_L = " << e.to_string() << '\n';
    os << "Omega_L:\n";
    ojson omega = ojson::array();
    const Chart& tq = sys.chart();
    for (std::size_t i = 0; i < w.size(); ++i) {
        for (std::size_t j = i + 1; j < w.size(); ++j) {
            const Expr c = w(i, j);
            if (c.is_zero()) continue;
            const std::string key = "d" + tq.name(i) + "^d" + tq.name(j);
            os << "  " << key << ": " << c.to_string() << '\n';
            omega.push_back({{"basis", key}, {"coefficient", c.to_string()}});
        }
    }
    if (omega.empty()) os << "  0\n";
    ojson hm = ojson::array();
    os << "Hessian:";
    for (const auto& row : h.matrix) {
        os << " [" << join(row) << "]";
        hm.push_back(strings(row));
    }
    os << "\nHessian verdict: " << regularity_name(h.verdict) << '\n';
    const LegendreRank fr = legendre_rank(sys, zero_config(p));
    os << "rank of T(FL): " << fr.min_rank;
    if (!fr.constant()) os << ".." << fr.max_rank << " (not constant)";
    os << " at " << fr.samples << " probes; connected fibres of FL assumed, not checked\n";
    r.text = os.str();
    r.exit_code = h.verdict == Regularity::Indeterminate ? kIndeterminate : kPass;
    r.json["command"] = "analyze";
    r.json["lagrangian"] = sys.lagrangian().to_string();
    r.json["legendre_map"] = strings(fl);
    r.json["energy"] = e.to_string();
    r.json["omega_L"] = omega;
    r.json["hessian"] = {{"matrix", hm}, {"verdict", regularity_name(h.verdict)}};
    r.json["legendre_rank"] = {{"min", fr.min_rank}, {"max", fr.max_rank}, {"samples", fr.samples}, {"constant", fr.constant()}};
    r.json["exit_code"] = r.exit_code;
    return r;
}

CommandResult run_chain(const Problem& p, Setting setting) {
    const ConstraintChain chain = chain_for(p, setting);
    CommandResult r;
    std::ostringstream os;
    os << "setting: " << to_string(setting) << '\n';
    ojson levels = ojson::array();
    for (std::size_t k = 1; k <= chain.final_level(); ++k) {
        os << "level " << k << ": {" << join(chain.level(k)) << "}\n";
        levels.push_back(strings(chain.level(k)));
    }
    os << "status: " << chain.status.to_string() << (chain.status.probabilistic ? " (probabilistic)" : "") << '\n';
    r.json["command"] = "chain";
    r.json["setting"] = to_string(setting);
    r.json["levels"] = levels;
    r.json["status"] = chain.status.to_string();
    r.json["kind"] = kind_name(chain.status.kind);
    r.json["index"] = chain.status.index;
    r.json["probabilistic"] = chain.status.probabilistic;
    if (chain.family) {
        os << "particular solution: (" << join(chain.family->particular) << ")\n";
        os << "kernel directions: " << chain.family->null_basis.size() << '\n';
        ojson basis = ojson::array();
        for (const auto& v : chain.family->null_basis) basis.push_back(strings(v));
        r.json["family"] = {{"particular", strings(chain.family->particular)},
                            {"null_basis", basis},
                            {"validity_level", chain.family->validity_level}};
    } else {
        r.json["family"] = nullptr;
    }
    r.exit_code = exit_for(chain.status);
    r.text = os.str();
    r.json["exit_code"] = r.exit_code;
    return r;
}

CommandResult run_hj_check(const Problem& p, const std::string& name, Setting setting) {
    const SectionSpec& s = p.section(name);
    const LagrangianSystem sys = p.system();
    const HJConfig cfg = hj_config(p);
    HJReport report;
    ConstraintChain chain;
    switch (setting) {
        case Setting::SkinnerRusk: {
            const PontryaginSystem ps = build_pontryagin(sys);
            chain = run_symbolic(skinner_rusk_system(ps), gnh_config(p));
            report = hj_check_sr(s.section, ps, chain, s.x, cfg);
            break;
        }
        case Setting::Lagrangian:
            chain = run_symbolic(lagrangian_system(sys), gnh_config(p));
            report = hj_check_lagrangian(s.section.Z, sys, chain, s.xi, cfg);
            break;
        case Setting::Hamiltonian: {
            const HamiltonianInput ham = hamiltonian_input(p);
            chain = run_symbolic(hamiltonian_system(p.n, ham.h1, ham.constraints, p.box), gnh_config(p));
            report = hj_check_hamiltonian(s.section.gamma, ham, chain, p.box, s.y, cfg);
            break;
        }
    }

    CommandResult r;
    std::ostringstream os;
    os << "section " << name << ", setting " << to_string(setting) << '\n';
    os << "Z = (" << join(s.section.Z) << "), gamma = (" << join(s.section.gamma) << ")"
       << (s.gamma_from_legendre ? " [FL o Z]" : "") << '\n';
    os << "chain: " << chain.status.to_string() << '\n';
    os << "conditions:\n";
    ojson conditions = ojson::array(), diagnostics = ojson::array();
    for (const auto& c : report.conditions) {
        condition_line(os, c);
        conditions.push_back(condition_json(c));
    }
    os << "diagnostics:\n";
    for (const auto& c : report.diagnostics) {
        condition_line(os, c);
        diagnostics.push_back(condition_json(c));
    }
    const Verdict overall = report.overall();
    os << "solution: " << to_string(overall) << '\n';
    const char* const assumed = "Q_f = pr(W_f) is a submanifold and pr restricted to the final level is a submersion";
    os << "assumed, not checked: " << assumed << '\n';
    r.exit_code = combine_exit(exit_for(overall), chain.status.kind == ChainStatus::Kind::Empty ? kFail : kPass);
    r.text = os.str();
    r.json["command"] = "hj-check";
    r.json["section"] = name;
    r.json["setting"] = to_string(setting);
    r.json["chain_status"] = chain.status.to_string();
    r.json["conditions"] = conditions;
    r.json["diagnostics"] = diagnostics;
    r.json["solution"] = report.is_solution();
    r.json["overall"] = to_string(overall);
    r.json["assumptions"] = ojson::array({assumed});
    r.json["exit_code"] = r.exit_code;
    return r;
}

CommandResult run_simulate(const Problem& p, const std::string& out_dir) {
    if (!p.simulate) throw InputError("simulate", "missing required field");
    const SimulateSpec& sim = *p.simulate;
    const SectionSpec& s = p.section(sim.section);
    const PontryaginSystem ps = build_pontryagin(p.system());
    const ConstraintChain chain = run_symbolic(skinner_rusk_system(ps), gnh_config(p));
    if (!s.x && !chain.family) throw PreconditionFailed("simulate: the chain has no solution family");
    const ExprVector x = s.x ? *s.x : chain.family->particular;
    const LiftResult lift = lift_and_compare(s.section, x, ps, chain, sim.q0, sim.t_end, sim.h);

    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    ojson files = ojson::array();
    for (const auto& [suffix, traj] : {std::pair<const char*, const Trajectory*>{"base", &lift.base},
                                       {"lifted", &lift.lifted},
                                       {"integral", &lift.integral}}) {
        const std::string path = (dir / (sim.section + "_" + suffix + ".csv")).string();
        write_atomic(path, to_csv(*traj));
        files.push_back(path);
    }

    CommandResult r;
    std::ostringstream os;
    os << "section " << sim.section << ", q0 = (";
    for (std::size_t i = 0; i < sim.q0.size(); ++i) os << (i ? ", " : "") << format_double(sim.q0[i]);
    os << "), t_end = " << format_double(sim.t_end) << ", h = " << format_double(sim.h) << '\n';
    os << "samples: " << lift.lifted.size() << '\n';
    os << "max residual |Omega . d/dt(sigma o c) - dD|: " << format_double(lift.max_residual) << '\n';
    os << "sup distance lifted vs integral curve of X: " << format_double(lift.distance) << '\n';
    if (lift.error) os << "error: " << *lift.error << '\n';
    for (const auto& f : files) os << "wrote " << f.get<std::string>() << '\n';
    const bool ok = !lift.error && lift.max_residual <= 1e-6;
    r.exit_code = ok ? kPass : kFail;
    r.text = os.str();
    r.json["command"] = "simulate";
    r.json["section"] = sim.section;
    r.json["samples"] = lift.lifted.size();
    r.json["max_residual"] = lift.max_residual;
    r.json["distance"] = lift.distance;
    r.json["error"] = lift.error ? ojson(*lift.error) : ojson(nullptr);
    r.json["files"] = files;
    r.json["exit_code"] = r.exit_code;
    return r;
}

CommandResult run_report(const Problem& p, const std::string& out_dir, const std::string& timestamp) {
    CommandResult r;
    std::ostringstream md;
    md << "# degenlag report\n\n";
    if (!timestamp.empty()) md << "Generated " << timestamp << ".\n\n";
    md << "## Problem\n\n";
    md << "- dimension: " << p.n << "\n- Lagrangian: `" << p.lagrangian_text << "`\n";
    md << "- probes: " << p.probes << ", seed: " << p.seed << "\n";
    md << "- sections: " << p.sections.size() << "\n\n";
    r.json["command"] = "report";

    auto block = [&md](const std::string& text) { md << "```text\n" << text << "```\n\n"; };

    md << "## Analysis\n\n";
    const CommandResult analyze = guarded([&] { return run_analyze(p); });
    block(analyze.text);
    r.json["analyze"] = analyze.json;
    r.exit_code = combine_exit(r.exit_code, analyze.exit_code);

    // The Hamiltonian setting needs M1 and h1; without them it is skipped, not failed.
    bool have_ham = true;
    std::string ham_note;
    try {
        hamiltonian_input(p);
    } catch (const std::exception& e) {
        have_ham = false;
        ham_note = e.what();
    }
    std::vector<Setting> settings{Setting::SkinnerRusk, Setting::Lagrangian};
    if (have_ham) settings.push_back(Setting::Hamiltonian);

    md << "## Constraint chains\n\n";
    ojson chains;
    for (Setting s : settings) {
        const CommandResult c = guarded([&] { return run_chain(p, s); });
        md << "### " << to_string(s) << "\n\n";
        block(c.text);
        chains[to_string(s)] = c.json;
        r.exit_code = combine_exit(r.exit_code, c.exit_code);
    }
    if (!have_ham) md << "Hamiltonian setting skipped: " << ham_note << "\n\n";
    r.json["chains"] = chains;

    md << "## Hamilton-Jacobi checks\n\n";
    ojson checks = ojson::array();
    if (p.sections.empty()) md << "No sections.\n\n";
    std::ostringstream details;
    if (!p.sections.empty()) md << "| section | setting | verdict | not passing |\n|---|---|---|---|\n";
    for (const auto& sec : p.sections) {
        for (Setting s : settings) {
            const CommandResult c = guarded([&] { return run_hj_check(p, sec.name, s); });
            std::string verdict = c.json.contains("overall") ? c.json["overall"].get<std::string>() : "error";
            std::string failing;
            if (c.json.contains("conditions")) {
                for (const auto& cond : c.json["conditions"]) {
                    if (cond["verdict"] != "pass") failing += (failing.empty() ? "" : ", ") + cond["id"].get<std::string>();
                }
            }
            md << "| " << sec.name << " | " << to_string(s) << " | " << verdict << " | " << failing << " |\n";
            details << "### " << sec.name << " (" << to_string(s) << ")\n\n```text\n" << c.text << "```\n\n";
            checks.push_back(c.json);
            r.exit_code = combine_exit(r.exit_code, c.exit_code);
        }
    }
    if (!p.sections.empty()) md << '\n' << details.str();
    r.json["hj_checks"] = checks;

    if (p.simulate) {
        md << "## Simulation\n\n";
        const CommandResult sim = guarded([&] { return run_simulate(p, out_dir); });
        block(sim.text);
        r.json["simulate"] = sim.json;
        r.exit_code = combine_exit(r.exit_code, sim.exit_code);
    }
    r.json["exit_code"] = r.exit_code;
    r.text = md.str();
    return r;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("", "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw InputError("", "write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, target);
}

}  // namespace degenlag
