#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "degenlag/error.hpp"
#include "degenlag/hamilton_jacobi.hpp"
#include "degenlag/mechanics.hpp"

namespace degenlag {

/// Schema violation in a problem file; `path` locates the offending field
/// ("sections.Z11.gamma[1]").
class InputError : public Error {
public:
    InputError(std::string path, const std::string& message)
        : Error((path.empty() ? std::string("problem file") : path) + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct SectionSpec {
    std::string name;
    Section section;
    bool gamma_from_legendre = false;  ///< gamma omitted: FL o Z
    std::optional<ExprVector> x;       ///< Skinner-Rusk field (3n, on (q, v, p))
    std::optional<ExprVector> xi;      ///< Lagrangian field (2n, on (q, v))
    std::optional<ExprVector> y;       ///< Hamiltonian field (2n, on (q, p))
};

struct HamiltonianSpec {
    Expr h1;
    ExprVector constraints;
};

struct SimulateSpec {
    std::string section;
    std::vector<double> q0;
    double t_end = 1.0;
    double h = 1e-3;
};

struct Problem {
    std::size_t n = 0;
    std::string lagrangian_text;
    Box box{Chart::pontryagin(1)};  ///< replaced by parse_problem
    std::vector<SectionSpec> sections;
    std::optional<HamiltonianSpec> hamiltonian;
    std::size_t probes = 100;
    std::uint64_t seed = 42;
    std::optional<SimulateSpec> simulate;

    LagrangianSystem system() const;
    const SectionSpec& section(const std::string& name) const;  ///< throws InputError
};

inline constexpr const char* kSchema = "degenlag/1";

/// Strict parse of a problem document: unknown keys, wrong types and
/// unparsable expressions are InputErrors with the field path.
Problem parse_problem(const std::string& text);
Problem load_problem(const std::string& path);

}  // namespace degenlag
