#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "degenlag/chart.hpp"
#include "degenlag/compiled.hpp"

namespace degenlag {

/// Which implementation of a data-parallel kernel to run. Serial is the
/// reference; Parallel uses OpenMP and must return identical results.
enum class Exec { Serial, Parallel };

struct Interval {
    double lo = -2.0;
    double hi = 2.0;
};

/// Axis-aligned box over a chart: the region in which random probes are drawn.
class Box {
public:
    explicit Box(Chart chart, Interval fallback = {});
    const Chart& chart() const { return chart_; }
    void set(const std::string& name, Interval interval);
    const Interval& operator[](std::size_t i) const { return intervals_[i]; }
    bool contains(std::span<const double> x, double slack = 1e-9) const;

    /// Same intervals restricted/extended to another chart (names matched, others fall back).
    Box rebased(const Chart& other) const;

private:
    Chart chart_;
    Interval fallback_;
    std::vector<Interval> intervals_;
};

/// splitmix64 mixing; probes are seeded per index so that serial and parallel
/// evaluation draw the same points.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform point in the box, deterministic in (seed, index).
std::vector<double> random_point(const Box& box, std::uint64_t seed, std::uint64_t index);

using PointSet = std::vector<std::vector<double>>;

PointSet random_points(const Box& box, std::size_t count, std::uint64_t seed);

/// Evaluates `f` at every point; domain errors give NaN.
std::vector<double> evaluate_batch(const CompiledExpr& f, const PointSet& points, Exec exec);

/// Maximum of |f| over the points (NaN entries ignored); 0 for an empty set.
double max_abs(std::span<const double> values);

}  // namespace degenlag
