#include "degenlag/problem.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "degenlag/parser.hpp"
#include "json.hpp"

namespace degenlag {

namespace {

using json = nlohmann::json;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string index(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) throw InputError(path, "expected an object");
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) throw InputError(join(path, key), "unknown field");
    }
}

const json& required(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw InputError(join(path, key), "missing required field");
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw InputError(path, "expected a number");
    return v.get<double>();
}

std::uint64_t unsigned_int(const json& v, const std::string& path) {
    if (!v.is_number_unsigned()) throw InputError(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

Expr expression(const json& v, const std::string& path, const Chart& chart) {
    if (!v.is_string()) throw InputError(path, "expected an expression string");
    try {
        return parse_expr(v.get<std::string>(), chart);
    } catch (const ParseError& e) {
        throw InputError(path, e.what());
    } catch (const UnknownIdentifier& e) {
        throw InputError(path, e.what());
    }
}

ExprVector expressions(const json& v, const std::string& path, const Chart& chart, std::size_t length) {
    if (!v.is_array()) throw InputError(path, "expected an array of expression strings");
    if (v.size() != length) {
        throw InputError(path, "expected " + std::to_string(length) + " entries, got " + std::to_string(v.size()));
    }
    ExprVector out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(expression(v[i], index(path, i), chart));
    return out;
}

ExprVector legendre_along(const Problem& p, const ExprVector& z) {
    const ExprVector fl = legendre_map(p.system());
    std::map<std::string, Expr> v_to_z;
    for (std::size_t a = 0; a < p.n; ++a) v_to_z[velocity_name(a)] = z[a];
    ExprVector out;
    for (const Expr& e : fl) out.push_back(substitute(e, v_to_z));
    return out;
}

}  // namespace

LagrangianSystem Problem::system() const {
    return LagrangianSystem(n, parse_expr(lagrangian_text, Chart::tangent(n)), box);
}

const SectionSpec& Problem::section(const std::string& name) const {
    for (const auto& s : sections) {
        if (s.name == name) return s;
    }
    throw InputError("sections." + name, "no such section");
}

Problem parse_problem(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError("", std::string("invalid JSON: ") + e.what());
    }
    allow_keys(doc, "", {"schema", "dim", "lagrangian", "box", "sections", "hamiltonian", "probes", "simulate"});
    const json& schema = required(doc, "", "schema");
    if (!schema.is_string() || schema.get<std::string>() != kSchema) {
        throw InputError("schema", std::string("expected \"") + kSchema + "\"");
    }

    Problem p;
    const std::uint64_t n = unsigned_int(required(doc, "", "dim"), "dim");
    if (n == 0 || n > 16) throw InputError("dim", "expected an integer in 1..16");
    p.n = static_cast<std::size_t>(n);
    const Chart pc = Chart::pontryagin(p.n);
    const Chart qc = Chart::configuration(p.n);

    const json& lagrangian = required(doc, "", "lagrangian");
    expression(lagrangian, "lagrangian", Chart::tangent(p.n));
    p.lagrangian_text = lagrangian.get<std::string>();

    p.box = Box(pc);
    if (const auto it = doc.find("box"); it != doc.end()) {
        if (!it->is_object()) throw InputError("box", "expected an object");
        for (const auto& [name, range] : it->items()) {
            const std::string path = join("box", name);
            if (!pc.contains(name)) throw InputError(path, "unknown coordinate");
            if (!range.is_array() || range.size() != 2) throw InputError(path, "expected [lo, hi]");
            const double lo = number(range[0], index(path, 0));
            const double hi = number(range[1], index(path, 1));
            if (!(lo < hi)) throw InputError(path, "expected lo < hi");
            p.box.set(name, {lo, hi});
        }
    }

    if (const auto it = doc.find("probes"); it != doc.end()) {
        allow_keys(*it, "probes", {"count", "seed"});
        if (it->contains("count")) {
            p.probes = static_cast<std::size_t>(unsigned_int((*it)["count"], "probes.count"));
            if (p.probes == 0) throw InputError("probes.count", "expected a positive integer");
        }
        if (it->contains("seed")) p.seed = unsigned_int((*it)["seed"], "probes.seed");
    }

    if (const auto it = doc.find("hamiltonian"); it != doc.end()) {
        allow_keys(*it, "hamiltonian", {"h1", "constraints"});
        HamiltonianSpec h;
        const Chart cq = Chart::cotangent(p.n);
        h.h1 = expression(required(*it, "hamiltonian", "h1"), "hamiltonian.h1", cq);
        if (it->contains("constraints")) {
            const json& c = (*it)["constraints"];
            if (!c.is_array()) throw InputError("hamiltonian.constraints", "expected an array of expression strings");
            h.constraints = expressions(c, "hamiltonian.constraints", cq, c.size());
        }
        p.hamiltonian = std::move(h);
    }

    if (const auto it = doc.find("sections"); it != doc.end()) {
        if (!it->is_object()) throw InputError("sections", "expected an object of named sections");
        for (const auto& [name, body] : it->items()) {
            const std::string path = join("sections", name);
            allow_keys(body, path, {"Z", "gamma", "X", "xi", "Y"});
            SectionSpec s;
            s.name = name;
            s.section.Z = expressions(required(body, path, "Z"), join(path, "Z"), qc, p.n);
            if (body.contains("gamma")) {
                s.section.gamma = expressions(body["gamma"], join(path, "gamma"), qc, p.n);
            } else {
                s.section.gamma = legendre_along(p, s.section.Z);
                s.gamma_from_legendre = true;
            }
            if (body.contains("X")) s.x = expressions(body["X"], join(path, "X"), pc, 3 * p.n);
            if (body.contains("xi")) s.xi = expressions(body["xi"], join(path, "xi"), Chart::tangent(p.n), 2 * p.n);
            if (body.contains("Y")) s.y = expressions(body["Y"], join(path, "Y"), Chart::cotangent(p.n), 2 * p.n);
            p.sections.push_back(std::move(s));
        }
    }

    if (const auto it = doc.find("simulate"); it != doc.end()) {
        allow_keys(*it, "simulate", {"section", "q0", "t_end", "h"});
        SimulateSpec sim;
        const json& section = required(*it, "simulate", "section");
        if (!section.is_string()) throw InputError("simulate.section", "expected a section name");
        sim.section = section.get<std::string>();
        bool known = false;
        for (const auto& s : p.sections) known = known || s.name == sim.section;
        if (!known) throw InputError("simulate.section", "no section named '" + sim.section + "'");
        const json& q0 = required(*it, "simulate", "q0");
        if (!q0.is_array() || q0.size() != p.n) {
            throw InputError("simulate.q0", "expected " + std::to_string(p.n) + " numbers");
        }
        for (std::size_t i = 0; i < q0.size(); ++i) sim.q0.push_back(number(q0[i], index("simulate.q0", i)));
        sim.t_end = number(required(*it, "simulate", "t_end"), "simulate.t_end");
        if (!(sim.t_end >= 0)) throw InputError("simulate.t_end", "expected a non-negative number");
        if (it->contains("h")) sim.h = number((*it)["h"], "simulate.h");
        if (!(sim.h > 0)) throw InputError("simulate.h", "expected a positive number");
        p.simulate = std::move(sim);
    }
    return p;
}

Problem load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("", "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

}  // namespace degenlag
