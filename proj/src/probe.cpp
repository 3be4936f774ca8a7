#include "degenlag/probe.hpp"

#include <cmath>
#include <stdexcept>

namespace degenlag {

Box::Box(Chart chart, Interval fallback)
    : chart_(std::move(chart)), fallback_(fallback), intervals_(chart_.size(), fallback) {}

void Box::set(const std::string& name, Interval interval) {
    if (!(interval.lo < interval.hi)) throw std::invalid_argument("box: degenerate interval for '" + name + "'");
    auto idx = chart_.index_of(name);
    if (!idx) throw std::invalid_argument("box: unknown coordinate '" + name + "'");
    intervals_[*idx] = interval;
}

bool Box::contains(std::span<const double> x, double slack) const {
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        if (!(x[i] >= intervals_[i].lo - slack && x[i] <= intervals_[i].hi + slack)) return false;
    }
    return true;
}

Box Box::rebased(const Chart& other) const {
    Box out(other, fallback_);
    for (std::size_t i = 0; i < other.size(); ++i) {
        if (auto idx = chart_.index_of(other.name(i))) out.intervals_[i] = intervals_[*idx];
    }
    return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<double> random_point(const Box& box, std::uint64_t seed, std::uint64_t index) {
    const std::size_t dim = box.chart().size();
    std::vector<double> x(dim);
    std::uint64_t state = mix_seed(seed, index);
    for (std::size_t i = 0; i < dim; ++i) {
        state = mix_seed(state, i);
        // 53 random mantissa bits -> [0, 1)
        const double u = static_cast<double>(state >> 11) * 0x1.0p-53;
        x[i] = box[i].lo + u * (box[i].hi - box[i].lo);
    }
    return x;
}

PointSet random_points(const Box& box, std::size_t count, std::uint64_t seed) {
    PointSet out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(random_point(box, seed, k));
    return out;
}

std::vector<double> evaluate_batch(const CompiledExpr& f, const PointSet& points, Exec exec) {
    const auto count = static_cast<std::ptrdiff_t>(points.size());
    std::vector<double> out(points.size());
    if (exec == Exec::Serial) {
        for (std::ptrdiff_t k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = f.eval_or_nan(points[static_cast<std::size_t>(k)]);
    } else {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = f.eval_or_nan(points[static_cast<std::size_t>(k)]);
    }
    return out;
}

double max_abs(std::span<const double> values) {
    double m = 0.0;
    for (double v : values) {
        if (!std::isnan(v) && std::abs(v) > m) m = std::abs(v);
    }
    return m;
}

}  // namespace degenlag
