#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "degenlag/compiled.hpp"
#include "degenlag/expr.hpp"
#include "degenlag/linalg.hpp"
#include "degenlag/probe.hpp"

namespace degenlag {

struct RetractResult {
    std::vector<double> x;
    double violation = 0.0;  ///< max |phi(x)|
    int iterations = 0;
    bool converged = false;
};

struct SampleResult {
    PointSet points;
    std::size_t attempts = 0;
    bool exhausted = false;  ///< attempt budget used up before `count` points were found
};

/// Zero set of a list of constraint functions inside a box, with Newton
/// retraction (minimum-norm Gauss-Newton steps) for sampling points on it.
class Variety {
public:
    Variety(Box box, ExprVector constraints);

    const Chart& chart() const { return box_.chart(); }
    const Box& box() const { return box_; }
    const ExprVector& constraints() const { return constraints_; }

    /// max_i |phi_i(x)|; +inf if a constraint cannot be evaluated.
    double violation(std::span<const double> x) const;
    bool contains(std::span<const double> x, double tol) const { return violation(x) <= tol; }

    /// Row-major Jacobian of the constraints at x.
    Matrix jacobian(std::span<const double> x) const;

    RetractResult retract(std::span<const double> x0, double tol = 1e-12, int max_iter = 50) const;

    /// Deterministic sampling: attempt k starts from random_point(box, seed, k)
    /// and is retracted; converged in-box points are kept in attempt order.
    SampleResult sample(std::size_t count, std::uint64_t seed, Exec exec = Exec::Parallel,
                        std::size_t max_attempts = 10000) const;

private:
    Box box_;
    ExprVector constraints_;
    CompiledVector values_;
    CompiledJacobian jacobian_;
};

}  // namespace degenlag
