#pragma once

#include <cstdint>

#include "degenlag/expr.hpp"
#include "degenlag/probe.hpp"

namespace degenlag {

enum class ZeroVerdict { Zero, NonZero, Indeterminate };

struct ZeroTestConfig {
    std::size_t samples = 32;
    double tolerance = 1e-9;
    std::uint64_t seed = 42;
};

/// Randomized identity test on a box.
///
/// Zero when |e| <= tolerance at every sample where it evaluates, NonZero as
/// soon as one evaluable sample exceeds the tolerance, Indeterminate when no
/// sample evaluates. A structurally zero expression is Zero without sampling.
ZeroVerdict is_identically_zero(const Expr& e, const Box& box, const ZeroTestConfig& config = {});

/// Same decision against a caller-provided probe set (e.g. points on a variety).
ZeroVerdict zero_on(const Expr& e, const Chart& chart, const PointSet& probes, double tolerance);

/// Sign pattern of an expression over a probe set.
enum class SignPattern { AllZero, AllNonZero, Mixed, Undefined };

SignPattern sign_pattern(const Expr& e, const Chart& chart, const PointSet& probes, double tolerance);

}  // namespace degenlag
