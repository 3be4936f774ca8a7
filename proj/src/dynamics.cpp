#include "degenlag/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "degenlag/compiled.hpp"
#include "degenlag/error.hpp"
#include "degenlag/variety.hpp"

namespace degenlag {

namespace {

std::size_t step_count(double t_end, double h) {
    if (!(h > 0.0)) throw PreconditionFailed("integration step must be positive");
    if (!(t_end >= 0.0)) throw PreconditionFailed("integration end time must be non-negative");
    return static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
}

void rk4_step(const CompiledVector& f, std::vector<double>& x, double h) {
    const std::size_t d = x.size();
    std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
    f(x, k1);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    f(tmp, k2);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    f(tmp, k3);
    for (std::size_t i = 0; i < d; ++i) tmp[i] = x[i] + h * k3[i];
    f(tmp, k4);
    for (std::size_t i = 0; i < d; ++i) x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// Shared driver; with a constraint set every step is followed by a retraction.
IntegrationResult integrate(const ExprVector& field, const Box& box, std::span<const double> x0, double t_end, double h,
                            const Variety* constraint_set) {
    const Chart& chart = box.chart();
    if (field.size() != chart.size()) throw DimensionMismatch("integrate: field length differs from chart size");
    if (x0.size() != chart.size()) throw DimensionMismatch("integrate: start point has wrong dimension");
    const std::size_t steps = step_count(t_end, h);
    if (!box.contains(x0)) throw PreconditionFailed("integrate: start point outside the box");

    IntegrationResult out;
    out.trajectory.names = chart.names();
    std::vector<double> x(x0.begin(), x0.end());
    out.trajectory.times.push_back(0.0);
    out.trajectory.states.push_back(x);
    if (constraint_set != nullptr) {
        out.max_violation = constraint_set->violation(x);
        if (out.max_violation > 1e-8) throw PreconditionFailed("integrate: start point violates the constraints");
    }
    if (steps == 0) return out;
    const double dt = t_end / static_cast<double>(steps);
    const CompiledVector f(field, chart);
    for (std::size_t k = 1; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        try {
            rk4_step(f, x, dt);
        } catch (const DomainError& e) {
            out.error = std::string("evaluation failed in the step to t = ") + std::to_string(t) + ": " + e.what();
            return out;
        }
        if (constraint_set != nullptr) {
            const RetractResult r = constraint_set->retract(x, 1e-12, 20);
            if (!r.converged) {
                out.error = "retraction diverged at t = " + std::to_string(t);
                return out;
            }
            x = r.x;
            out.max_violation = std::max(out.max_violation, r.violation);
        }
        out.trajectory.times.push_back(k == steps ? t_end : t);
        out.trajectory.states.push_back(x);
    }
    return out;
}

}  // namespace

IntegrationResult integrate_field(const ExprVector& field, const Box& box, std::span<const double> x0, double t_end,
                                  double h) {
    return integrate(field, box, x0, t_end, h, nullptr);
}

IntegrationResult integrate_on_constraints(const ExprVector& field, const ExprVector& constraints, const Box& box,
                                           std::span<const double> x0, double t_end, double h) {
    if (constraints.empty()) return integrate(field, box, x0, t_end, h, nullptr);
    const Variety v(box, constraints);
    return integrate(field, box, x0, t_end, h, &v);
}

std::vector<IntegrationResult> integrate_batch(const ExprVector& field, const Box& box, const PointSet& starts,
                                               double t_end, double h, Exec exec) {
    std::vector<IntegrationResult> out(starts.size());
    const auto n = static_cast<std::ptrdiff_t>(starts.size());
    if (exec == Exec::Serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = integrate_field(field, box, starts[i], t_end, h);
        return out;
    }
    // Exceptions cannot leave an OpenMP region; keep the first one and rethrow.
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = integrate_field(field, box, starts[i], t_end, h);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

LiftResult lift_and_compare(const Section& s, const ExprVector& x, const PontryaginSystem& ps,
                            const ConstraintChain& chain, std::span<const double> q0, double t_end, double h) {
    const std::size_t n = ps.n();
    if (s.Z.size() != n || s.gamma.size() != n) throw DimensionMismatch("lift: section has wrong length");
    if (x.size() != 3 * n) throw DimensionMismatch("lift: X must have 3n components");
    if (q0.size() != n) throw DimensionMismatch("lift: q0 has wrong dimension");
    const Chart qc = Chart::configuration(n);
    const Box q_box = ps.box().rebased(qc);

    ExprVector embedding;
    for (std::size_t a = 0; a < n; ++a) embedding.push_back(Expr::variable(position_name(a)));
    embedding.insert(embedding.end(), s.Z.begin(), s.Z.end());
    embedding.insert(embedding.end(), s.gamma.begin(), s.gamma.end());
    const CompiledVector sigma(embedding, qc);

    const ExprVector& wf = chain.final_constraints();
    const Variety final_level(ps.box(), wf);
    const std::vector<double> start = sigma(q0);
    if (final_level.violation(start) > 1e-8) throw PreconditionFailed("lift: sigma(q0) is not in the final level");

    LiftResult out;
    const ExprVector xs = projected_field(s, x, n);
    IntegrationResult base = integrate_field(xs, q_box, q0, t_end, h);
    out.base = std::move(base.trajectory);
    out.error = base.error;

    // Lifted curve and its velocity T sigma(X^sigma) along c.
    const CompiledJacobian dsigma(embedding, qc);
    const CompiledVector xsc(xs, qc);
    const CompiledMatrix omega(ps.omega.matrix(), ps.chart);
    const CompiledVector dd(ps.dD, ps.chart);
    out.lifted.names = ps.chart.names();
    std::vector<double> jac(3 * n * n);
    for (std::size_t k = 0; k < out.base.size(); ++k) {
        const auto& q = out.base.states[k];
        try {
            const std::vector<double> p = sigma(q);
            const std::vector<double> w = xsc(q);
            dsigma(q, jac);
            Vector vel = Vector::Zero(static_cast<Eigen::Index>(3 * n));
            for (std::size_t r = 0; r < 3 * n; ++r) {
                for (std::size_t c = 0; c < n; ++c) vel[static_cast<Eigen::Index>(r)] += jac[r * n + c] * w[c];
            }
            const std::vector<double> d = dd(p);
            const Vector res =
                omega(p).transpose() * vel - Eigen::Map<const Vector>(d.data(), static_cast<Eigen::Index>(d.size()));
            out.lifted.times.push_back(out.base.times[k]);
            out.lifted.states.push_back(p);
            out.residuals.push_back(res.cwiseAbs().maxCoeff());
            out.max_residual = std::max(out.max_residual, out.residuals.back());
        } catch (const DomainError& e) {
            if (!out.error) out.error = std::string("lift failed at t = ") + std::to_string(out.base.times[k]) + ": " + e.what();
            break;
        }
    }

    IntegrationResult integral = integrate_on_constraints(x, wf, ps.box(), start, t_end, h);
    out.integral = std::move(integral.trajectory);
    if (!out.error) out.error = integral.error;
    const std::size_t common = std::min(out.lifted.size(), out.integral.size());
    for (std::size_t k = 0; k < common; ++k) {
        for (std::size_t i = 0; i < 3 * n; ++i) {
            out.distance = std::max(out.distance, std::abs(out.lifted.states[k][i] - out.integral.states[k][i]));
        }
    }
    return out;
}

void write_csv(const Trajectory& trajectory, std::ostream& out) {
    out << 't';
    for (const auto& name : trajectory.names) out << ',' << name;
    out << '\n';
    char buf[32];
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", trajectory.times[k]);
        out << buf;
        for (double v : trajectory.states[k]) {
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out << ',' << buf;
        }
        out << '\n';
    }
}

std::string to_csv(const Trajectory& trajectory) {
    std::ostringstream os;
    write_csv(trajectory, os);
    return os.str();
}

}  // namespace degenlag
