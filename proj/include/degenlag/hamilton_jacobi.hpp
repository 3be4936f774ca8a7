#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "degenlag/gnh.hpp"
#include "degenlag/mechanics.hpp"
#include "degenlag/pontryagin.hpp"

namespace degenlag {

/// sigma = (Z, gamma): a vector field and a 1-form on Q, components in q.
struct Section {
    ExprVector Z;
    ExprVector gamma;
};

enum class Verdict { Pass, Fail, Indeterminate };
const char* to_string(Verdict v);

struct Condition {
    std::string id;
    Verdict verdict = Verdict::Indeterminate;
    double residual = 0.0;
    std::string witness;  ///< human-readable evidence (offending expression, point, defect vector)
};

struct HJReport {
    std::string setting;                ///< "sr", "lag" or "ham"
    std::vector<Condition> conditions;  ///< all must pass for a solution
    std::vector<Condition> diagnostics;  ///< informative only

    bool is_solution() const;
    /// Pass if a solution, Fail if any condition failed, otherwise Indeterminate.
    Verdict overall() const;
    const Condition* find(const std::string& id) const;
};

struct HJConfig {
    std::size_t probes = 100;
    std::uint64_t seed = 42;
    double tolerance = 1e-9;             ///< vanishing / residual threshold
    double membership_tolerance = 1e-8;  ///< constraint satisfaction at probe points
    ZeroTestConfig zero{};
};

/// (M1 constraints, h1) on T*Q.
struct HamiltonianInput {
    ExprVector constraints;
    Expr h1;
    bool derived = false;
};

/// Derives M1 and h1 when dL/dv is affine in v: C(q) v = p - b(q) is eliminated
/// symbolically, M1 is its compatibility conditions and h1 = E_L at the
/// particular solution. Throws PreconditionFailed when L is not of that form
/// or the result fails validation.
HamiltonianInput derive_hamiltonian(const LagrangianSystem& sys, const ZeroTestConfig& config = {});

/// Checks h1 o FL - E_L == 0 and that FL maps into M1 (zero test on TQ).
bool validate_hamiltonian(const HamiltonianInput& ham, const LagrangianSystem& sys, const ZeroTestConfig& config = {});

Condition check_gamma_closed(const ExprVector& gamma, const Box& q_box, const ZeroTestConfig& config = {});
Condition check_in_W1(const Section& s, const LagrangianSystem& sys, const ZeroTestConfig& config = {});

/// Points q with sigma(q) in W_f (root search on phi(sigma(q)) = 0; plain box
/// points when every such constraint vanishes identically).
PointSet sigma_flat_probes(const ExprVector& pulled_constraints, const Box& q_box, const HJConfig& config);

/// d(D o sigma) restricted to {q : sigma(q) in W_f}.
Condition check_dD_sigma(const Section& s, const PontryaginSystem& ps, const ConstraintChain& chain,
                         const HJConfig& config = {});

/// The four conditions in the Skinner-Rusk setting; diagnostics (KernelMembership,
/// SigmaRelated) use `x` when given, otherwise the chain's particular solution.
HJReport hj_check_sr(const Section& s, const PontryaginSystem& ps, const ConstraintChain& chain,
                     const std::optional<ExprVector>& x = std::nullopt, const HJConfig& config = {});

/// q-components of X along sigma.
ExprVector projected_field(const Section& s, const ExprVector& x, std::size_t n);

/// Delta = X o sigma - T sigma(X^sigma) for a map q -> ambient given by `embedding`.
ExprVector relatedness_defect(const ExprVector& embedding, const Chart& ambient, const ExprVector& x, std::size_t n);

/// Omega . Delta along sigma vanishes on {q : sigma(q) in W_f}.
Condition kernel_membership(const Section& s, const ExprVector& x, const PontryaginSystem& ps,
                            const ConstraintChain& chain, const HJConfig& config = {});
/// Every component of Delta vanishes on the same probe set.
Condition sigma_relatedness(const Section& s, const ExprVector& x, const PontryaginSystem& ps,
                            const ConstraintChain& chain, const HJConfig& config = {});

/// Hamiltonian setting: InM1, InMf, GammaClosed, DCircGammaFlat; SigmaRelated
/// diagnostic for Y (default: the chain's particular solution) from its residual.
HJReport hj_check_hamiltonian(const ExprVector& gamma, const HamiltonianInput& ham, const ConstraintChain& chain,
                              const Box& box, const std::optional<ExprVector>& y = std::nullopt,
                              const HJConfig& config = {});

/// Lagrangian setting: InPf, PullbackOmegaL, DCircZFlat; KernelMembership and
/// ZRelated diagnostics for xi (default: the chain's particular solution).
HJReport hj_check_lagrangian(const ExprVector& z, const LagrangianSystem& sys, const ConstraintChain& chain,
                             const std::optional<ExprVector>& xi = std::nullopt, const HJConfig& config = {});

/// Theorem-style SODE point: solves p = FL(q, v) for v by Newton from each
/// seed and returns (q, a(q, v)) with a the q-components of xi. Throws
/// PreconditionFailed on Newton failure or if the result depends on the seed
/// (beyond 1e-8).
std::vector<double> sode_point(const ExprVector& xi, const LagrangianSystem& sys, std::span<const double> qp,
                               const std::vector<std::vector<double>>& seeds);

struct SectionFromGamma {
    Section section;
    double residual = 0.0;  ///< max ||Omega^T T sigma(Y^gamma) - dD|| over probes
    Verdict verdict = Verdict::Indeterminate;
};

/// sigma = (Y^gamma, gamma) with Y^gamma the q-components of Y along gamma,
/// plus the check that T sigma(Y^gamma) solves the Skinner-Rusk equation along it.
SectionFromGamma build_section_from_gamma(const ExprVector& gamma, const ExprVector& y, const PontryaginSystem& ps,
                                          const HJConfig& config = {});

enum class Target { Lagrangian, Hamiltonian };

/// Lagrangian: (a, b) with p replaced by FL(q, v). Hamiltonian: (a, c).
/// Throws PreconditionFailed if X is not tangent to W1 at probes of `level`
/// (constraints of the level where X is valid; empty: W1 itself).
ExprVector project_solution(const ExprVector& x, Target target, const PontryaginSystem& ps,
                            const HJConfig& config = {}, const ExprVector& level = {});

/// max ||i_X1 Omega_L - dE_L|| at the given (q, v) points.
double lagrangian_residual(const LagrangianSystem& sys, const ExprVector& x1, const PointSet& qv_points);
/// max residual of i_X2 Omega_Q = dh1 modulo M1 at the given (q, v, p) points
/// (X2 may depend on v).
double hamiltonian_residual(const HamiltonianInput& ham, std::size_t n, const ExprVector& x2, const PointSet& qvp_points);

}  // namespace degenlag
