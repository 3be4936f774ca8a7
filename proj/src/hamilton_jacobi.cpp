#include "degenlag/hamilton_jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "degenlag/elimination.hpp"
#include "degenlag/error.hpp"
#include "degenlag/linalg.hpp"
#include "degenlag/variety.hpp"

namespace degenlag {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "?";
}

bool HJReport::is_solution() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const Condition& c) { return c.verdict == Verdict::Pass; });
}

Verdict HJReport::overall() const {
    if (is_solution()) return Verdict::Pass;
    for (const auto& c : conditions) {
        if (c.verdict == Verdict::Fail) return Verdict::Fail;
    }
    return Verdict::Indeterminate;
}

const Condition* HJReport::find(const std::string& id) const {
    for (const auto* list : {&conditions, &diagnostics}) {
        for (const auto& c : *list) {
            if (c.id == id) return &c;
        }
    }
    return nullptr;
}

namespace {

std::string format_vector(std::span<const double> x) {
    std::string s = "(";
    char buf[32];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6g", std::abs(x[i]) < 1e-15 ? 0.0 : x[i]);
        s += (i ? ", " : "") + std::string(buf);
    }
    return s + ")";
}

std::string format_point(const Chart& chart, std::span<const double> x) {
    std::string s;
    char buf[48];
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%s%s=%.6g", i ? ", " : "", chart.name(i).c_str(), x[i]);
        s += buf;
    }
    return s;
}

std::map<std::string, Expr> bindings(const Chart& ambient, const ExprVector& embedding) {
    std::map<std::string, Expr> b;
    for (std::size_t i = 0; i < ambient.size(); ++i) b[ambient.name(i)] = embedding[i];
    return b;
}

ExprVector substitute_all(const ExprVector& v, const std::map<std::string, Expr>& b) {
    ExprVector out;
    out.reserve(v.size());
    for (const Expr& e : v) out.push_back(substitute(e, b));
    return out;
}

// q -> (q, parts[0], parts[1], ...) in an ambient chart whose first n coordinates are q.
ExprVector embedding_of(std::size_t n, std::initializer_list<const ExprVector*> parts) {
    ExprVector emb;
    for (std::size_t a = 0; a < n; ++a) emb.push_back(Expr::variable(position_name(a)));
    for (const auto* p : parts) {
        if (p->size() != n) throw DimensionMismatch("section: component count differs from n");
        emb.insert(emb.end(), p->begin(), p->end());
    }
    return emb;
}

Condition identically_zero(std::string id, const ExprVector& exprs, const Box& box, const ZeroTestConfig& config) {
    Condition c{std::move(id), Verdict::Pass, 0.0, ""};
    const PointSet probes = random_points(box, config.samples, config.seed);
    for (const Expr& e : exprs) {
        const ZeroVerdict z = is_identically_zero(e, box, config);
        if (!e.is_zero()) c.residual = std::max(c.residual, max_abs(evaluate_batch(CompiledExpr(e, box.chart()), probes, Exec::Serial)));
        if (z == ZeroVerdict::NonZero) {
            c.verdict = Verdict::Fail;
            if (c.witness.empty()) c.witness = e.to_string() + " != 0";
        } else if (z == ZeroVerdict::Indeterminate && c.verdict == Verdict::Pass) {
            c.verdict = Verdict::Indeterminate;
            c.witness = e.to_string() + " could not be evaluated";
        }
    }
    return c;
}

// Constraints that do not already vanish identically along the section.
ExprVector active(const ExprVector& pulled, const Box& q_box, const ZeroTestConfig& config) {
    ExprVector out;
    for (const Expr& e : pulled) {
        if (is_identically_zero(e, q_box, config) != ZeroVerdict::Zero) out.push_back(e);
    }
    return out;
}

// The gradient of f restricted to the probe set, tangentially to {psi = 0}.
Condition restricted_vanishing(std::string id, const Expr& f, const ExprVector& pulled, const Box& q_box,
                               const HJConfig& config) {
    const Chart& qc = q_box.chart();
    Condition c{std::move(id), Verdict::Pass, 0.0, ""};
    const ExprVector grad = differential(f, qc);
    const bool everywhere = std::all_of(grad.begin(), grad.end(), [&](const Expr& g) {
        return is_identically_zero(g, q_box, config.zero) == ZeroVerdict::Zero;
    });
    if (everywhere) return c;

    const ExprVector psi = active(pulled, q_box, config.zero);
    const PointSet probes = sigma_flat_probes(pulled, q_box, config);
    if (probes.empty()) {
        c.verdict = Verdict::Indeterminate;
        c.witness = "no points found with the section inside the final constraint set";
        return c;
    }
    const CompiledVector g(grad, qc);
    std::optional<Variety> tangent;
    if (!psi.empty()) tangent.emplace(q_box, psi);
    for (const auto& q : probes) {
        std::vector<double> gv;
        try {
            gv = g(q);
        } catch (const DomainError&) {
            continue;
        }
        Vector v = Eigen::Map<const Vector>(gv.data(), static_cast<Eigen::Index>(gv.size()));
        if (tangent) {
            const Matrix n = null_space(tangent->jacobian(q));
            v = n * (n.transpose() * v);
        }
        const double r = v.cwiseAbs().maxCoeff();
        if (r > c.residual) {
            c.residual = r;
            if (r > config.tolerance) c.witness = "nonzero at " + format_point(qc, q) + ": " + format_vector(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
        }
    }
    if (c.residual > config.tolerance) c.verdict = Verdict::Fail;
    return c;
}

// Im(section restricted to Q_f) inside the final level, Q_f = base projection of samples of the final level.
Condition image_in_final(std::string id, const ExprVector& final_constraints, const Box& ambient_box,
                         const ExprVector& embedding, const Box& q_box, const HJConfig& config) {
    const Chart& ambient = ambient_box.chart();
    const Chart& qc = q_box.chart();
    Condition c{std::move(id), Verdict::Pass, 0.0, ""};
    PointSet base;
    if (final_constraints.empty()) {
        base = random_points(q_box, config.probes, config.seed);
    } else {
        const auto pts = Variety(ambient_box, final_constraints).sample(config.probes, mix_seed(config.seed, 77)).points;
        for (const auto& x : pts) base.emplace_back(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(qc.size()));
    }
    if (base.empty()) {
        c.verdict = Verdict::Indeterminate;
        c.witness = "final constraint set has no sample points";
        return c;
    }
    const ExprVector pulled = substitute_all(final_constraints, bindings(ambient, embedding));
    const CompiledVector f(pulled, qc);
    for (const auto& q : base) {
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double v = f[i].eval_or_nan(q);
            const double r = std::isfinite(v) ? std::abs(v) : INFINITY;
            if (r > c.residual) {
                c.residual = r;
                if (r > config.membership_tolerance) {
                    c.witness = final_constraints[i].to_string() + " = " + std::to_string(v) + " at " + format_point(qc, q);
                }
            }
        }
    }
    if (c.residual > config.membership_tolerance) c.verdict = Verdict::Fail;
    return c;
}

// Kernel and relatedness diagnostics of Delta = X o s - T s (X^s) at points q with s(q) in the final level.
std::pair<Condition, Condition> relatedness_diagnostics(const std::string& kernel_id, const std::string& related_id,
                                                        const ExprVector& embedding, const TwoForm& omega,
                                                        const ExprVector& x, const ExprVector& final_constraints,
                                                        const Box& q_box, const HJConfig& config) {
    const Chart& ambient = omega.chart();
    const Chart& qc = q_box.chart();
    const std::size_t n = qc.size();
    Condition kernel{kernel_id, Verdict::Pass, 0.0, ""};
    Condition related{related_id, Verdict::Pass, 0.0, ""};
    const auto b = bindings(ambient, embedding);
    const ExprVector delta = relatedness_defect(embedding, ambient, x, n);
    ExprVector od(ambient.size());
    for (std::size_t j = 0; j < ambient.size(); ++j) {
        Expr acc;
        for (std::size_t i = 0; i < ambient.size(); ++i) {
            if (i == j || delta[i].is_zero()) continue;
            const Expr m = substitute(omega(i, j), b);
            if (!m.is_zero()) acc = acc + delta[i] * m;
        }
        od[j] = acc;
    }
    const PointSet probes = sigma_flat_probes(substitute_all(final_constraints, b), q_box, config);
    if (probes.empty()) {
        kernel.verdict = related.verdict = Verdict::Indeterminate;
        kernel.witness = related.witness = "no points found with the section inside the final constraint set";
        return {kernel, related};
    }
    const CompiledVector dv(delta, qc);
    const CompiledVector ov(od, qc);
    for (const auto& q : probes) {
        std::vector<double> d, o;
        try {
            d = dv(q);
            o = ov(q);
        } catch (const DomainError&) {
            continue;
        }
        const double rd = max_abs(d);
        const double ro = max_abs(o);
        if (related.witness.empty() || rd > related.residual) {
            related.residual = rd;
            related.witness = "Delta = " + format_vector(d) + " at " + format_point(qc, q);
        }
        if (ro > kernel.residual) {
            kernel.residual = ro;
            if (ro > config.tolerance) kernel.witness = "Omega.Delta = " + format_vector(o) + " at " + format_point(qc, q);
        }
    }
    if (kernel.residual > config.tolerance) kernel.verdict = Verdict::Fail;
    if (related.residual > config.tolerance) related.verdict = Verdict::Fail;
    if (kernel.witness.empty()) kernel.witness = "Delta = " + related.witness.substr(related.witness.find('=') + 2);
    return {kernel, related};
}

Condition no_field(const std::string& id) {
    return Condition{id, Verdict::Indeterminate, 0.0, "no solution field available (chain did not stabilize)"};
}

Box q_box_of(const Box& any, std::size_t n) { return any.rebased(Chart::configuration(n)); }

}  // namespace

PointSet sigma_flat_probes(const ExprVector& pulled_constraints, const Box& q_box, const HJConfig& config) {
    const ExprVector psi = active(pulled_constraints, q_box, config.zero);
    if (psi.empty()) return random_points(q_box, config.probes, mix_seed(config.seed, 31));
    return Variety(q_box, psi).sample(config.probes, mix_seed(config.seed, 37)).points;
}

Condition check_gamma_closed(const ExprVector& gamma, const Box& q_box, const ZeroTestConfig& config) {
    const Chart& qc = q_box.chart();
    ExprVector curls;
    for (std::size_t a = 0; a < gamma.size(); ++a) {
        for (std::size_t b = a + 1; b < gamma.size(); ++b) {
            curls.push_back(differentiate(gamma[a], qc.name(b)) - differentiate(gamma[b], qc.name(a)));
        }
    }
    return identically_zero("GammaClosed", curls, q_box, config);
}

Condition check_in_W1(const Section& s, const LagrangianSystem& sys, const ZeroTestConfig& config) {
    const std::size_t n = sys.n();
    const ExprVector emb = embedding_of(n, {&s.Z});
    const ExprVector fl = substitute_all(legendre_map(sys), bindings(sys.chart(), emb));
    ExprVector diff;
    for (std::size_t a = 0; a < n; ++a) diff.push_back(s.gamma[a] - fl[a]);
    return identically_zero("InW1", diff, q_box_of(sys.box(), n), config);
}

Condition check_dD_sigma(const Section& s, const PontryaginSystem& ps, const ConstraintChain& chain,
                         const HJConfig& config) {
    const std::size_t n = ps.n();
    const ExprVector emb = embedding_of(n, {&s.Z, &s.gamma});
    const auto b = bindings(ps.chart, emb);
    return restricted_vanishing("DCircSigmaFlat", substitute(ps.D, b), substitute_all(chain.final_constraints(), b),
                                q_box_of(ps.box(), n), config);
}

ExprVector projected_field(const Section& s, const ExprVector& x, std::size_t n) {
    const ExprVector emb = embedding_of(n, {&s.Z, &s.gamma});
    const auto b = bindings(Chart::pontryagin(n), emb);
    ExprVector out;
    for (std::size_t a = 0; a < n; ++a) out.push_back(substitute(x[a], b));
    return out;
}

ExprVector relatedness_defect(const ExprVector& embedding, const Chart& ambient, const ExprVector& x, std::size_t n) {
    if (x.size() != ambient.size() || embedding.size() != ambient.size()) {
        throw DimensionMismatch("relatedness: field and embedding must match the ambient chart");
    }
    const ExprVector along = substitute_all(x, bindings(ambient, embedding));
    ExprVector delta(ambient.size());
    for (std::size_t i = 0; i < ambient.size(); ++i) {
        Expr push;
        for (std::size_t b = 0; b < n; ++b) {
            const Expr d = differentiate(embedding[i], position_name(b));
            if (!d.is_zero()) push = push + d * along[b];
        }
        delta[i] = along[i] - push;
    }
    return delta;
}

Condition kernel_membership(const Section& s, const ExprVector& x, const PontryaginSystem& ps,
                            const ConstraintChain& chain, const HJConfig& config) {
    const ExprVector emb = embedding_of(ps.n(), {&s.Z, &s.gamma});
    return relatedness_diagnostics("KernelMembership", "SigmaRelated", emb, ps.omega, x, chain.final_constraints(),
                                   q_box_of(ps.box(), ps.n()), config)
        .first;
}

Condition sigma_relatedness(const Section& s, const ExprVector& x, const PontryaginSystem& ps,
                            const ConstraintChain& chain, const HJConfig& config) {
    const ExprVector emb = embedding_of(ps.n(), {&s.Z, &s.gamma});
    return relatedness_diagnostics("KernelMembership", "SigmaRelated", emb, ps.omega, x, chain.final_constraints(),
                                   q_box_of(ps.box(), ps.n()), config)
        .second;
}

HJReport hj_check_sr(const Section& s, const PontryaginSystem& ps, const ConstraintChain& chain,
                     const std::optional<ExprVector>& x, const HJConfig& config) {
    const std::size_t n = ps.n();
    const Box qb = q_box_of(ps.box(), n);
    HJReport r;
    r.setting = "sr";
    const ExprVector emb = embedding_of(n, {&s.Z, &s.gamma});
    r.conditions.push_back(check_in_W1(s, ps.lagrangian, config.zero));
    r.conditions.push_back(image_in_final("InWf", chain.final_constraints(), ps.box(), emb, qb, config));
    r.conditions.push_back(check_gamma_closed(s.gamma, qb, config.zero));
    r.conditions.push_back(check_dD_sigma(s, ps, chain, config));
    const ExprVector* field = x ? &*x : (chain.family ? &chain.family->particular : nullptr);
    if (field) {
        auto [k, rel] = relatedness_diagnostics("KernelMembership", "SigmaRelated", emb, ps.omega, *field,
                                                chain.final_constraints(), qb, config);
        r.diagnostics.push_back(k);
        r.diagnostics.push_back(rel);
    } else {
        r.diagnostics.push_back(no_field("KernelMembership"));
        r.diagnostics.push_back(no_field("SigmaRelated"));
    }
    return r;
}

HJReport hj_check_hamiltonian(const ExprVector& gamma, const HamiltonianInput& ham, const ConstraintChain& chain,
                              const Box& box, const std::optional<ExprVector>& y, const HJConfig& config) {
    const std::size_t n = gamma.size();
    const Chart tq = Chart::cotangent(n);
    const Box qb = q_box_of(box, n);
    const Box ambient = box.rebased(tq);
    const ExprVector emb = embedding_of(n, {&gamma});
    const auto b = bindings(tq, emb);
    HJReport r;
    r.setting = "ham";
    Condition m1 = identically_zero("InM1", substitute_all(ham.constraints, b), qb, config.zero);
    r.conditions.push_back(m1);
    r.conditions.push_back(image_in_final("InMf", chain.final_constraints(), ambient, emb, qb, config));
    r.conditions.push_back(check_gamma_closed(gamma, qb, config.zero));
    r.conditions.push_back(
        restricted_vanishing("DCircGammaFlat", substitute(ham.h1, b), substitute_all(chain.final_constraints(), b), qb, config));
    TwoForm omega(tq);
    for (std::size_t a = 0; a < n; ++a) omega.set(a, n + a, Expr(1));
    const ExprVector* field = y ? &*y : (chain.family ? &chain.family->particular : nullptr);
    if (field) {
        r.diagnostics.push_back(relatedness_diagnostics("KernelMembership", "SigmaRelated", emb, omega, *field,
                                                        chain.final_constraints(), qb, config)
                                    .second);
    } else {
        r.diagnostics.push_back(no_field("SigmaRelated"));
    }
    return r;
}

HJReport hj_check_lagrangian(const ExprVector& z, const LagrangianSystem& sys, const ConstraintChain& chain,
                             const std::optional<ExprVector>& xi, const HJConfig& config) {
    const std::size_t n = sys.n();
    const Box qb = q_box_of(sys.box(), n);
    const ExprVector emb = embedding_of(n, {&z});
    const auto b = bindings(sys.chart(), emb);
    HJReport r;
    r.setting = "lag";
    r.conditions.push_back(image_in_final("InPf", chain.final_constraints(), sys.box_for(sys.chart()), emb, qb, config));
    const TwoForm pulled = pullback_two_form(omega_L(sys), z, qb.chart());
    ExprVector coeffs;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t c = a + 1; c < n; ++c) coeffs.push_back(pulled(a, c));
    }
    r.conditions.push_back(identically_zero("PullbackOmegaL", coeffs, qb, config.zero));
    r.conditions.push_back(restricted_vanishing("DCircZFlat", substitute(energy(sys), b),
                                                substitute_all(chain.final_constraints(), b), qb, config));
    const ExprVector* field = xi ? &*xi : (chain.family ? &chain.family->particular : nullptr);
    if (field) {
        auto [k, rel] = relatedness_diagnostics("KernelMembership", "ZRelated", emb, omega_L(sys), *field,
                                                chain.final_constraints(), qb, config);
        r.diagnostics.push_back(k);
        r.diagnostics.push_back(rel);
    } else {
        r.diagnostics.push_back(no_field("KernelMembership"));
        r.diagnostics.push_back(no_field("ZRelated"));
    }
    return r;
}

HamiltonianInput derive_hamiltonian(const LagrangianSystem& sys, const ZeroTestConfig& config) {
    const std::size_t n = sys.n();
    const Chart tq = sys.chart();
    const Chart cq = Chart::cotangent(n);
    const Box tbox = sys.box_for(tq);
    const ExprVector fl = legendre_map(sys);
    std::map<std::string, Expr> v_zero;
    for (std::size_t a = 0; a < n; ++a) v_zero[velocity_name(a)] = Expr();

    SymbolicLinearSystem ls;
    ls.unknowns = n;
    for (std::size_t a = 0; a < n; ++a) {
        ExprVector row;
        for (std::size_t b = 0; b < n; ++b) {
            const Expr c = differentiate(fl[a], velocity_name(b));
            for (std::size_t k = 0; k < n; ++k) {
                if (is_identically_zero(differentiate(c, velocity_name(k)), tbox, config) != ZeroVerdict::Zero) {
                    throw PreconditionFailed("cannot derive h1: dL/dv is not affine in v; supply the Hamiltonian");
                }
            }
            row.push_back(substitute(c, v_zero));
        }
        ls.rows.push_back(std::move(row));
        ls.rhs.push_back(Expr::variable(momentum_name(a)) - substitute(fl[a], v_zero));
    }
    const Box cbox = sys.box_for(cq);
    const EliminationResult er = eliminate(ls, cq, random_points(cbox, config.samples, config.seed), config.tolerance);
    std::map<std::string, Expr> v_star;
    for (std::size_t a = 0; a < n; ++a) v_star[velocity_name(a)] = er.particular[a];
    HamiltonianInput ham{er.conditions, substitute(energy(sys), v_star), true};
    if (!validate_hamiltonian(ham, sys, config)) {
        throw PreconditionFailed("cannot derive h1: E_L is not constant on the Legendre fibres; supply the Hamiltonian");
    }
    return ham;
}

bool validate_hamiltonian(const HamiltonianInput& ham, const LagrangianSystem& sys, const ZeroTestConfig& config) {
    const std::size_t n = sys.n();
    const ExprVector fl = legendre_map(sys);
    std::map<std::string, Expr> p_fl;
    for (std::size_t a = 0; a < n; ++a) p_fl[momentum_name(a)] = fl[a];
    const Box tbox = sys.box_for(sys.chart());
    if (is_identically_zero(substitute(ham.h1, p_fl) - energy(sys), tbox, config) != ZeroVerdict::Zero) return false;
    for (const Expr& c : ham.constraints) {
        if (is_identically_zero(substitute(c, p_fl), tbox, config) != ZeroVerdict::Zero) return false;
    }
    return true;
}

std::vector<double> sode_point(const ExprVector& xi, const LagrangianSystem& sys, std::span<const double> qp,
                               const std::vector<std::vector<double>>& seeds) {
    const std::size_t n = sys.n();
    if (xi.size() != 2 * n || qp.size() != 2 * n) throw DimensionMismatch("sode_point: expected 2n components");
    const Chart tq = sys.chart();
    const ExprVector fl = legendre_map(sys);
    const CompiledVector flc(fl, tq);
    const CompiledJacobian jac(fl, tq);
    const CompiledVector a(ExprVector(xi.begin(), xi.begin() + static_cast<std::ptrdiff_t>(n)), tq);
    std::vector<std::vector<double>> starts = seeds;
    if (starts.empty()) starts.emplace_back(n, 0.0);

    std::vector<double> first;
    for (const auto& seed : starts) {
        if (seed.size() != n) throw DimensionMismatch("sode_point: seed must have n components");
        std::vector<double> x(qp.begin(), qp.begin() + static_cast<std::ptrdiff_t>(n));
        x.insert(x.end(), seed.begin(), seed.end());
        bool ok = false;
        std::vector<double> jbuf(n * 2 * n);
        for (int it = 0; it < 50; ++it) {
            const std::vector<double> f = flc(x);
            Vector r(static_cast<Eigen::Index>(n));
            for (std::size_t k = 0; k < n; ++k) r(static_cast<Eigen::Index>(k)) = f[k] - qp[n + k];
            if (r.cwiseAbs().maxCoeff() <= 1e-12) {
                ok = true;
                break;
            }
            jac(x, jbuf);
            Matrix jv(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < n; ++k) jv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = jbuf[i * 2 * n + n + k];
            }
            const LeastSquares step = solve_least_squares(jv, r, 1e-12);
            if (step.rank == 0) break;
            for (std::size_t k = 0; k < n; ++k) x[n + k] -= step.x(static_cast<Eigen::Index>(k));
        }
        if (!ok) throw PreconditionFailed("sode_point: no point of the Legendre fibre found from seed " + format_vector(seed));
        std::vector<double> out(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
        const std::vector<double> vel = a(x);
        out.insert(out.end(), vel.begin(), vel.end());
        if (first.empty()) {
            first = out;
        } else {
            for (std::size_t k = 0; k < 2 * n; ++k) {
                if (std::abs(out[k] - first[k]) > 1e-8) {
                    throw PreconditionFailed("sode_point: result depends on the fibre point: " + format_vector(first) +
                                             " vs " + format_vector(out));
                }
            }
        }
    }
    return first;
}

SectionFromGamma build_section_from_gamma(const ExprVector& gamma, const ExprVector& y, const PontryaginSystem& ps,
                                          const HJConfig& config) {
    const std::size_t n = ps.n();
    if (y.size() != 2 * n) throw DimensionMismatch("build_section_from_gamma: Y must have 2n components");
    const ExprVector gemb = embedding_of(n, {&gamma});
    const auto gb = bindings(Chart::cotangent(n), gemb);
    SectionFromGamma out;
    for (std::size_t a = 0; a < n; ++a) out.section.Z.push_back(substitute(y[a], gb));
    out.section.gamma = gamma;

    const ExprVector emb = embedding_of(n, {&out.section.Z, &gamma});
    const auto b = bindings(ps.chart, emb);
    // X = T sigma(Z) and the Skinner-Rusk residual Omega^T X - dD along sigma.
    ExprVector x(3 * n);
    for (std::size_t i = 0; i < 3 * n; ++i) {
        Expr acc;
        for (std::size_t c = 0; c < n; ++c) {
            const Expr d = differentiate(emb[i], position_name(c));
            if (!d.is_zero()) acc = acc + d * out.section.Z[c];
        }
        x[i] = acc;
    }
    const ExprVector contracted = ps.omega.contract(x);
    ExprVector residual;
    for (std::size_t j = 0; j < 3 * n; ++j) residual.push_back(contracted[j] - substitute(ps.dD[j], b));
    const Box qb = q_box_of(ps.box(), n);
    const CompiledVector rv(residual, qb.chart());
    out.verdict = Verdict::Pass;
    bool any = false;
    for (const auto& q : random_points(qb, config.probes, config.seed)) {
        try {
            out.residual = std::max(out.residual, max_abs(rv(q)));
            any = true;
        } catch (const DomainError&) {
        }
    }
    if (!any) {
        out.verdict = Verdict::Indeterminate;
    } else if (out.residual > config.tolerance) {
        out.verdict = Verdict::Fail;
    }
    return out;
}

ExprVector project_solution(const ExprVector& x, Target target, const PontryaginSystem& ps, const HJConfig& config,
                            const ExprVector& level) {
    const std::size_t n = ps.n();
    if (x.size() != 3 * n) throw DimensionMismatch("project_solution: X must have 3n components");
    const ExprVector prim = primary_constraints(ps);
    const PointSet pts =
        Variety(ps.box(), level.empty() ? prim : level).sample(config.probes, mix_seed(config.seed, 91)).points;
    if (pts.empty()) throw PreconditionFailed("project_solution: no sample points on the validity level");
    const CompiledVector xv(x, ps.chart);
    const CompiledJacobian jac(prim, ps.chart);
    std::vector<double> jbuf(prim.size() * 3 * n);
    for (const auto& p : pts) {
        const std::vector<double> xp = xv(p);
        jac(p, jbuf);
        for (std::size_t r = 0; r < prim.size(); ++r) {
            double dot = 0.0;
            for (std::size_t c = 0; c < 3 * n; ++c) dot += jbuf[r * 3 * n + c] * xp[c];
            if (std::abs(dot) > config.membership_tolerance) {
                throw PreconditionFailed("project_solution: X is not tangent to W1 at " + format_point(ps.chart, p));
            }
        }
    }
    ExprVector out(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
    if (target == Target::Lagrangian) {
        const ExprVector fl = legendre_map(ps.lagrangian);
        std::map<std::string, Expr> p_fl;
        for (std::size_t a = 0; a < n; ++a) p_fl[momentum_name(a)] = fl[a];
        out.resize(2 * n);
        for (std::size_t a = 0; a < 2 * n; ++a) out[a] = substitute(x[a], p_fl);
    } else {
        out.insert(out.end(), x.begin() + static_cast<std::ptrdiff_t>(2 * n), x.end());
    }
    return out;
}

double lagrangian_residual(const LagrangianSystem& sys, const ExprVector& x1, const PointSet& qv_points) {
    const Chart& tq = sys.chart();
    const CompiledMatrix m(omega_L(sys).matrix(), tq);
    const CompiledVector de(differential(energy(sys), tq), tq);
    const CompiledVector xv(x1, tq);
    double worst = 0.0;
    for (const auto& p : qv_points) {
        const std::vector<double> x = xv(p);
        const std::vector<double> d = de(p);
        const Vector r = m(p).transpose() * Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size())) -
                         Eigen::Map<const Vector>(d.data(), static_cast<Eigen::Index>(d.size()));
        worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
    return worst;
}

double hamiltonian_residual(const HamiltonianInput& ham, std::size_t n, const ExprVector& x2, const PointSet& qvp_points) {
    const Chart pb = Chart::pontryagin(n);
    const Chart cq = Chart::cotangent(n);
    const CompiledVector xv(x2, pb);
    const CompiledVector dh(differential(ham.h1, cq), cq);
    std::vector<ExprVector> grads;
    for (const Expr& c : ham.constraints) grads.push_back(differential(c, cq));
    const CompiledMatrix j(grads, cq);
    double worst = 0.0;
    for (const auto& p : qvp_points) {
        std::vector<double> qp(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n));
        qp.insert(qp.end(), p.begin() + static_cast<std::ptrdiff_t>(2 * n), p.end());
        const std::vector<double> x = xv(p);
        const std::vector<double> d = dh(qp);
        // i_X (dq ^ dp) = (-c, a)
        Vector r(static_cast<Eigen::Index>(2 * n));
        for (std::size_t a = 0; a < n; ++a) {
            r(static_cast<Eigen::Index>(a)) = -x[n + a] - d[a];
            r(static_cast<Eigen::Index>(n + a)) = x[a] - d[n + a];
        }
        const double res = grads.empty() ? r.cwiseAbs().maxCoeff() : solve_least_squares(j(qp).transpose(), r).residual;
        worst = std::max(worst, res);
    }
    return worst;
}

}  // namespace degenlag
