#include "degenlag/variety.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "degenlag/error.hpp"
#include "degenlag/linalg.hpp"

namespace degenlag {

Variety::Variety(Box box, ExprVector constraints)
    : box_(std::move(box)),
      constraints_(std::move(constraints)),
      values_(constraints_, box_.chart()),
      jacobian_(constraints_, box_.chart()) {}

double Variety::violation(std::span<const double> x) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double v = values_[i].eval_or_nan(x);
        if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
        worst = std::max(worst, std::abs(v));
    }
    return worst;
}

Matrix Variety::jacobian(std::span<const double> x) const {
    Matrix j(static_cast<Eigen::Index>(jacobian_.rows()), static_cast<Eigen::Index>(jacobian_.cols()));
    std::vector<double> buf(jacobian_.rows() * jacobian_.cols());
    jacobian_(x, buf);
    for (std::size_t r = 0; r < jacobian_.rows(); ++r) {
        for (std::size_t c = 0; c < jacobian_.cols(); ++c) {
            j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = buf[r * jacobian_.cols() + c];
        }
    }
    return j;
}

RetractResult Variety::retract(std::span<const double> x0, double tol, int max_iter) const {
    RetractResult out;
    out.x.assign(x0.begin(), x0.end());
    if (constraints_.empty()) {
        out.converged = true;
        return out;
    }
    const auto m = static_cast<Eigen::Index>(constraints_.size());
    Vector phi(m);
    auto refresh = [&]() -> bool {
        for (Eigen::Index i = 0; i < m; ++i) {
            const double v = values_[static_cast<std::size_t>(i)].eval_or_nan(out.x);
            if (!std::isfinite(v)) return false;
            phi(i) = v;
        }
        out.violation = phi.cwiseAbs().maxCoeff();
        return true;
    };
    if (!refresh()) {
        out.violation = std::numeric_limits<double>::infinity();
        return out;
    }
    int polish = 0;
    for (out.iterations = 0; out.iterations < max_iter; ++out.iterations) {
        if (out.violation <= tol) {
            // Two extra steps push the residual down to rounding level.
            if (++polish > 2 || out.violation == 0.0) break;
        }
        Matrix j;
        try {
            j = jacobian(out.x);
        } catch (const DomainError&) {
            return out;
        }
        const LeastSquares step = solve_least_squares(j, phi, 1e-12);
        if (step.rank == 0) break;
        const double before = out.violation;
        for (std::size_t i = 0; i < out.x.size(); ++i) out.x[i] -= step.x(static_cast<Eigen::Index>(i));
        if (!refresh()) {
            out.violation = std::numeric_limits<double>::infinity();
            return out;
        }
        if (polish > 0 && out.violation >= before) break;
    }
    out.converged = out.violation <= tol;
    return out;
}

SampleResult Variety::sample(std::size_t count, std::uint64_t seed, Exec exec, std::size_t max_attempts) const {
    SampleResult result;
    if (count == 0) return result;
    const std::size_t batch = std::max<std::size_t>(64, 2 * count);
    std::size_t next = 0;
    while (result.points.size() < count && next < max_attempts) {
        const std::size_t size = std::min(batch, max_attempts - next);
        std::vector<std::optional<std::vector<double>>> found(size);
        auto attempt = [&](std::size_t k) {
            const auto start = random_point(box_, seed, next + k);
            RetractResult r = retract(start);
            if (r.converged && box_.contains(r.x)) found[k] = std::move(r.x);
        };
        const auto n = static_cast<std::ptrdiff_t>(size);
        if (exec == Exec::Serial) {
            for (std::ptrdiff_t k = 0; k < n; ++k) attempt(static_cast<std::size_t>(k));
        } else {
#pragma omp parallel for schedule(dynamic, 8)
            for (std::ptrdiff_t k = 0; k < n; ++k) attempt(static_cast<std::size_t>(k));
        }
        for (std::size_t k = 0; k < size && result.points.size() < count; ++k) {
            result.attempts = next + k + 1;
            if (found[k]) result.points.push_back(std::move(*found[k]));
        }
        next += size;
    }
    result.exhausted = result.points.size() < count;
    return result;
}

}  // namespace degenlag
