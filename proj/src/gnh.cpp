#include "degenlag/gnh.hpp"

#include <algorithm>
#include <cmath>

#include "degenlag/error.hpp"
#include "degenlag/zero_test.hpp"

namespace degenlag {

PresymplecticSystem skinner_rusk_system(const PontryaginSystem& ps) {
    return PresymplecticSystem{ps.chart, ps.omega, ps.dD, {}, ps.box()};
}

PresymplecticSystem lagrangian_system(const LagrangianSystem& sys) {
    return PresymplecticSystem{sys.chart(), omega_L(sys), differential(energy(sys), sys.chart()), {},
                               sys.box_for(sys.chart())};
}

PresymplecticSystem hamiltonian_system(std::size_t n, const Expr& h1, const ExprVector& m1, const Box& box) {
    const Chart chart = Chart::cotangent(n);
    TwoForm omega(chart);
    for (std::size_t a = 0; a < n; ++a) omega.set(a, n + a, Expr(1));
    return PresymplecticSystem{chart, omega, differential(h1, chart), m1, box.rebased(chart)};
}

std::string ChainStatus::to_string() const {
    switch (kind) {
        case Kind::Stabilized: return "Stabilized(" + std::to_string(index) + ")";
        case Kind::Empty: return "Empty(" + std::to_string(index) + ")";
        case Kind::Budget: return "Budget";
    }
    return "?";
}

namespace {

// Rows of  Omega^T x - J1^T mu = alpha  followed by  J_level x = 0.
SymbolicLinearSystem build_system(const PresymplecticSystem& sys, const ExprVector& tangency) {
    const std::size_t n = sys.chart.size();
    const std::size_t m = sys.initial_constraints.size();
    SymbolicLinearSystem ls;
    ls.unknowns = n + m;
    std::vector<ExprVector> grads;
    for (const Expr& phi : sys.initial_constraints) grads.push_back(differential(phi, sys.chart));
    for (std::size_t j = 0; j < n; ++j) {
        ExprVector row(n + m);
        for (std::size_t i = 0; i < n; ++i) row[i] = sys.omega(i, j);
        for (std::size_t k = 0; k < m; ++k) row[n + k] = -grads[k][j];
        ls.rows.push_back(std::move(row));
        ls.rhs.push_back(sys.alpha[j]);
    }
    for (const Expr& psi : tangency) {
        ExprVector row(n + m);
        const ExprVector g = differential(psi, sys.chart);
        std::copy(g.begin(), g.end(), row.begin());
        ls.rows.push_back(std::move(row));
        ls.rhs.push_back(Expr());
    }
    return ls;
}

SolutionFamily family_from(const EliminationResult& r, std::size_t n, std::size_t level) {
    SolutionFamily fam;
    fam.validity_level = level;
    fam.particular.assign(r.particular.begin(), r.particular.begin() + static_cast<std::ptrdiff_t>(n));
    for (const auto& v : r.null_basis) {
        ExprVector x(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n));
        if (std::all_of(x.begin(), x.end(), [](const Expr& e) { return e.is_zero(); })) continue;
        fam.null_basis.push_back(std::move(x));
    }
    return fam;
}

PointSet probes_on(const Box& box, const ExprVector& constraints, const GnhConfig& config, std::uint64_t stream) {
    if (constraints.empty()) return random_points(box, config.probes, mix_seed(config.seed, stream));
    return Variety(box, constraints)
        .sample(config.probes, mix_seed(config.seed, stream), Exec::Parallel, config.max_attempts)
        .points;
}

void validate(const PresymplecticSystem& sys) {
    if (sys.alpha.size() != sys.chart.size() || sys.omega.size() != sys.chart.size()) {
        throw DimensionMismatch("presymplectic system: form sizes differ from the chart");
    }
}

// Keeps the candidates that are not already implied by `current` and the ones accepted before them.
ExprVector independent_conditions(const PresymplecticSystem& sys, const ExprVector& current,
                                  const ExprVector& candidates, const GnhConfig& config, std::uint64_t stream) {
    ExprVector accepted;
    ExprVector base = current;
    PointSet probes = probes_on(sys.box, base, config, stream);
    for (const Expr& c : candidates) {
        if (probes.empty()) {
            accepted.push_back(c);
            continue;
        }
        switch (zero_on(c, sys.chart, probes, config.zero_tol)) {
            case ZeroVerdict::Zero: break;
            case ZeroVerdict::Indeterminate: throw IndeterminateZeroTest(c.to_string());
            case ZeroVerdict::NonZero:
                accepted.push_back(c);
                base.push_back(c);
                probes = probes_on(sys.box, base, config, stream + accepted.size());
                break;
        }
    }
    return accepted;
}

}  // namespace

Solvability solvability_conditions(const PresymplecticSystem& sys, const GnhConfig& config) {
    validate(sys);
    const PointSet probes = probes_on(sys.box, sys.initial_constraints, config, 0);
    const EliminationResult r = eliminate(build_system(sys, {}), sys.chart, probes, config.zero_tol);
    return Solvability{r.conditions, family_from(r, sys.chart.size(), 1)};
}

ConstraintChain run_symbolic(const PresymplecticSystem& sys, const GnhConfig& config) {
    validate(sys);
    const std::size_t max_iter = config.max_iter ? config.max_iter : 3 * sys.chart.dimension() + 3;
    ConstraintChain chain;

    {
        const PointSet probes = probes_on(sys.box, sys.initial_constraints, config, 0);
        if (probes.empty() && !sys.initial_constraints.empty()) {
            chain.levels.push_back(sys.initial_constraints);
            chain.status = {ChainStatus::Kind::Empty, 1, true};
            return chain;
        }
        const EliminationResult r = eliminate(build_system(sys, {}), sys.chart, probes, config.zero_tol);
        ExprVector level = sys.initial_constraints;
        for (const Expr& c : independent_conditions(sys, level, r.conditions, config, 1000)) level.push_back(c);
        chain.levels.push_back(std::move(level));
    }

    for (std::size_t k = 1; k <= max_iter; ++k) {
        const ExprVector& current = chain.levels.back();
        const PointSet probes = probes_on(sys.box, current, config, 1000 * (k + 1));
        if (probes.empty()) {
            chain.status = {ChainStatus::Kind::Empty, k, true};
            return chain;
        }
        const EliminationResult r = eliminate(build_system(sys, current), sys.chart, probes, config.zero_tol);
        const ExprVector fresh = independent_conditions(sys, current, r.conditions, config, 1000 * (k + 1) + 1);
        if (fresh.empty()) {
            chain.status = {ChainStatus::Kind::Stabilized, k, false};
            chain.family = family_from(r, sys.chart.size(), k);
            return chain;
        }
        ExprVector next = current;
        next.insert(next.end(), fresh.begin(), fresh.end());
        chain.levels.push_back(std::move(next));
    }
    chain.status = {ChainStatus::Kind::Budget, max_iter, false};
    return chain;
}

double equation_residual(const PresymplecticSystem& sys, std::span<const double> point, std::span<const double> x) {
    const auto n = static_cast<Eigen::Index>(sys.chart.size());
    if (x.size() != sys.chart.size() || point.size() != sys.chart.size()) {
        throw DimensionMismatch("equation residual: wrong vector length");
    }
    const Matrix m = CompiledMatrix(sys.omega.matrix(), sys.chart)(point);
    const std::vector<double> alpha = CompiledVector(sys.alpha, sys.chart)(point);
    const Vector r = m.transpose() * Eigen::Map<const Vector>(x.data(), n) - Eigen::Map<const Vector>(alpha.data(), n);
    if (sys.initial_constraints.empty()) return r.cwiseAbs().maxCoeff();
    const Matrix j = Variety(sys.box, sys.initial_constraints).jacobian(point);
    return solve_least_squares(j.transpose(), r).residual;
}

PointwiseClassifier::PointwiseClassifier(const PresymplecticSystem& sys, const ConstraintChain& chain, double tolerance)
    : dim_(sys.chart.size()),
      tol_(tolerance),
      omega_(sys.omega.matrix(), sys.chart),
      alpha_(sys.alpha, sys.chart),
      initial_(sys.initial_constraints, sys.chart),
      initial_jacobian_(sys.initial_constraints, sys.chart) {
    for (const auto& level : chain.levels) jacobians_.emplace_back(level, sys.chart);
}

double PointwiseClassifier::step_residual(std::span<const double> x, std::size_t tangency_level) const {
    const auto n = static_cast<Eigen::Index>(dim_);
    const auto m = static_cast<Eigen::Index>(initial_.size());
    const CompiledJacobian* tan = tangency_level ? &jacobians_[tangency_level - 1] : nullptr;
    const auto t = tan ? static_cast<Eigen::Index>(tan->rows()) : Eigen::Index{0};
    Matrix a = Matrix::Zero(n + t, n + m);
    Vector b = Vector::Zero(n + t);
    a.topLeftCorner(n, n) = omega_(x).transpose();
    alpha_(x, std::span<double>(b.data(), dim_));
    std::vector<double> buf;
    if (m > 0) {
        buf.resize(static_cast<std::size_t>(m * n));
        initial_jacobian_(x, buf);
        for (Eigen::Index k = 0; k < m; ++k) {
            for (Eigen::Index j = 0; j < n; ++j) a(j, n + k) = -buf[static_cast<std::size_t>(k * n + j)];
        }
    }
    if (t > 0) {
        buf.resize(static_cast<std::size_t>(t * n));
        (*tan)(x, buf);
        for (Eigen::Index r = 0; r < t; ++r) {
            for (Eigen::Index j = 0; j < n; ++j) a(n + r, j) = buf[static_cast<std::size_t>(r * n + j)];
        }
    }
    return solve_least_squares(a, b).residual;
}

std::vector<double> PointwiseClassifier::residuals(std::span<const double> x) const {
    std::vector<double> out;
    for (std::size_t i = 0; i < initial_.size(); ++i) {
        const double v = std::abs(initial_[i].eval_or_nan(x));
        if (!(v <= tol_)) return {std::isfinite(v) ? v : INFINITY};
    }
    for (std::size_t k = 0; k < jacobians_.size(); ++k) {
        double r = INFINITY;
        try {
            r = step_residual(x, k);
        } catch (const DomainError&) {
        }
        out.push_back(r);
        if (!(r <= tol_)) break;
    }
    return out;
}

std::size_t PointwiseClassifier::classify(std::span<const double> x) const {
    std::size_t level = 0;
    for (double r : residuals(x)) {
        if (!(r <= tol_)) break;
        ++level;
    }
    return std::min(level, jacobians_.size());
}

std::size_t run_pointwise(const PresymplecticSystem& sys, const ConstraintChain& chain, std::span<const double> point,
                          double tolerance) {
    return PointwiseClassifier(sys, chain, tolerance).classify(point);
}

std::vector<std::size_t> classify_points(const PointwiseClassifier& classifier, const PointSet& points, Exec exec) {
    std::vector<std::size_t> out(points.size());
    const auto count = static_cast<std::ptrdiff_t>(points.size());
    if (exec == Exec::Serial) {
        for (std::ptrdiff_t k = 0; k < count; ++k) {
            out[static_cast<std::size_t>(k)] = classifier.classify(points[static_cast<std::size_t>(k)]);
        }
    } else {
#pragma omp parallel for schedule(dynamic, 64)
        for (std::ptrdiff_t k = 0; k < count; ++k) {
            out[static_cast<std::size_t>(k)] = classifier.classify(points[static_cast<std::size_t>(k)]);
        }
    }
    return out;
}

namespace {

std::size_t membership_with(const std::vector<CompiledVector>& levels, std::span<const double> x, double tolerance) {
    std::size_t depth = 0;
    for (const auto& level : levels) {
        for (std::size_t i = 0; i < level.size(); ++i) {
            if (!(std::abs(level[i].eval_or_nan(x)) <= tolerance)) return depth;
        }
        ++depth;
    }
    return depth;
}

std::vector<CompiledVector> compile_levels(const ConstraintChain& chain, const Chart& chart) {
    std::vector<CompiledVector> out;
    for (const auto& level : chain.levels) out.emplace_back(level, chart);
    return out;
}

}  // namespace

std::size_t symbolic_membership(const ConstraintChain& chain, const Chart& chart, std::span<const double> x,
                                double tolerance) {
    return membership_with(compile_levels(chain, chart), x, tolerance);
}

std::vector<std::size_t> symbolic_membership(const ConstraintChain& chain, const Chart& chart, const PointSet& points,
                                             double tolerance, Exec exec) {
    const auto levels = compile_levels(chain, chart);
    std::vector<std::size_t> out(points.size());
    const auto count = static_cast<std::ptrdiff_t>(points.size());
    if (exec == Exec::Serial) {
        for (std::ptrdiff_t k = 0; k < count; ++k) {
            out[static_cast<std::size_t>(k)] = membership_with(levels, points[static_cast<std::size_t>(k)], tolerance);
        }
    } else {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < count; ++k) {
            out[static_cast<std::size_t>(k)] = membership_with(levels, points[static_cast<std::size_t>(k)], tolerance);
        }
    }
    return out;
}

bool ProjectionReport::ok() const {
    for (const auto& f : forward) {
        if (f.sampling_failed || f.passed != f.sampled) return false;
    }
    return !reverse.sampling_failed && reverse.passed == reverse.sampled;
}

namespace {

// Gauss-Newton on the coordinates listed in `free` only, the rest held fixed.
bool lift_into(const Variety& target, std::vector<double>& x, const std::vector<std::size_t>& free, double tol) {
    const std::size_t m = target.constraints().size();
    if (m == 0) return true;
    const CompiledVector f(target.constraints(), target.chart());
    for (int it = 0; it < 50; ++it) {
        const std::vector<double> phi = f(x);
        double worst = 0.0;
        for (double v : phi) worst = std::max(worst, std::abs(v));
        if (worst <= tol * 1e-3) return true;
        const Matrix j = target.jacobian(x);
        Matrix jf(j.rows(), static_cast<Eigen::Index>(free.size()));
        for (std::size_t c = 0; c < free.size(); ++c) jf.col(static_cast<Eigen::Index>(c)) = j.col(static_cast<Eigen::Index>(free[c]));
        const LeastSquares step = solve_least_squares(jf, Eigen::Map<const Vector>(phi.data(), static_cast<Eigen::Index>(m)), 1e-12);
        for (std::size_t c = 0; c < free.size(); ++c) x[free[c]] -= step.x(static_cast<Eigen::Index>(c));
    }
    return target.violation(x) <= tol;
}

struct ProjectionSetup {
    Chart target_chart;
    std::vector<std::size_t> keep;  ///< pontryagin indices kept by the projection, in target order
    std::vector<std::size_t> lift;  ///< pontryagin indices solved for in the reverse check
};

ProjectionReport project_chain(const PontryaginSystem& ps, const ConstraintChain& sr_chain,
                               const ConstraintChain& other, const ProjectionSetup& setup, std::size_t samples,
                               std::uint64_t seed, double tolerance) {
    ProjectionReport report;
    const Box box = ps.box();
    for (std::size_t k = 1; k <= sr_chain.levels.size(); ++k) {
        LevelProjection lp;
        lp.level = k;
        const SampleResult s = Variety(box, sr_chain.level(k)).sample(samples, mix_seed(seed, k));
        lp.sampled = s.points.size();
        lp.sampling_failed = s.points.empty();
        const std::size_t target_level = std::min(k, other.levels.size());
        const Variety target(box.rebased(setup.target_chart), other.level(target_level));
        for (const auto& x : s.points) {
            std::vector<double> y;
            for (std::size_t i : setup.keep) y.push_back(x[i]);
            const double viol = target.violation(y);
            lp.worst = std::max(lp.worst, viol);
            if (viol <= tolerance) ++lp.passed;
        }
        report.forward.push_back(lp);
    }
    // Reverse: points of the other chain's final level come from some point of W_f.
    const Variety wf(box, sr_chain.final_constraints());
    const Variety of(box.rebased(setup.target_chart), other.final_constraints());
    const SampleResult s = of.sample(samples, mix_seed(seed, 999));
    report.reverse.level = other.levels.size();
    report.reverse.sampled = s.points.size();
    report.reverse.sampling_failed = s.points.empty();
    for (std::size_t idx = 0; idx < s.points.size(); ++idx) {
        const auto& y = s.points[idx];
        bool lifted = false;
        double best = INFINITY;
        for (int attempt = 0; attempt < 4 && !lifted; ++attempt) {
            std::vector<double> x = random_point(box, mix_seed(seed, 5000 + idx), static_cast<std::uint64_t>(attempt));
            if (attempt == 0) {
                for (std::size_t i : setup.lift) x[i] = 0.0;
            }
            for (std::size_t c = 0; c < setup.keep.size(); ++c) x[setup.keep[c]] = y[c];
            lifted = lift_into(wf, x, setup.lift, tolerance);
            best = std::min(best, wf.violation(x));
        }
        report.reverse.worst = std::max(report.reverse.worst, best);
        if (lifted) ++report.reverse.passed;
    }
    return report;
}

}  // namespace

ProjectionReport check_projection_lemma(const PontryaginSystem& ps, const ConstraintChain& sr_chain,
                                        const ConstraintChain& ham_chain, std::size_t samples, std::uint64_t seed,
                                        double tolerance) {
    const std::size_t n = ps.n();
    ProjectionSetup setup{Chart::cotangent(n), {}, {}};
    for (std::size_t a = 0; a < n; ++a) setup.keep.push_back(a);
    for (std::size_t a = 0; a < n; ++a) setup.keep.push_back(2 * n + a);
    for (std::size_t a = 0; a < n; ++a) setup.lift.push_back(n + a);
    return project_chain(ps, sr_chain, ham_chain, setup, samples, seed, tolerance);
}

ProjectionReport check_projection_lemma_lagrangian(const PontryaginSystem& ps, const ConstraintChain& sr_chain,
                                                   const ConstraintChain& lag_chain, std::size_t samples,
                                                   std::uint64_t seed, double tolerance) {
    const std::size_t n = ps.n();
    ProjectionSetup setup{Chart::tangent(n), {}, {}};
    for (std::size_t a = 0; a < 2 * n; ++a) setup.keep.push_back(a);
    for (std::size_t a = 0; a < n; ++a) setup.lift.push_back(2 * n + a);
    // Only base points are compared in reverse: P_f and W_f share Q_f, velocities may differ.
    for (std::size_t a = 0; a < n; ++a) setup.lift.push_back(n + a);
    return project_chain(ps, sr_chain, lag_chain, setup, samples, seed, tolerance);
}

}  // namespace degenlag
