#pragma once

#include <vector>

#include "degenlag/chart.hpp"
#include "degenlag/expr.hpp"
#include "degenlag/probe.hpp"

namespace degenlag {

/// Linear system  A x = b  whose coefficients and right-hand sides are
/// expressions in the coordinates of a chart.
struct SymbolicLinearSystem {
    std::vector<ExprVector> rows;  ///< each of length `unknowns`
    ExprVector rhs;
    std::size_t unknowns = 0;
};

struct EliminationResult {
    /// Right-hand sides of rows left without a pivot that do not vanish on the
    /// probe set; the system is solvable exactly where all of them vanish.
    ExprVector conditions;
    ExprVector particular;               ///< free unknowns set to zero
    std::vector<ExprVector> null_basis;  ///< one vector per free unknown
    std::vector<std::size_t> pivot_columns;
    std::vector<std::size_t> free_columns;
};

/// Gauss-Jordan elimination with pivot decisions taken on a probe set.
///
/// Every coefficient is classified over `probes` (typically points of the
/// current constraint set): entries vanishing at all probes are replaced by 0,
/// a pivot must be nonzero at every probe, and a column whose only candidates
/// vanish at some probes but not others raises NonConstantRank.
EliminationResult eliminate(SymbolicLinearSystem system, const Chart& chart, const PointSet& probes,
                            double tolerance);

/// Drops sign and constant factors: c*e -> e, -e -> e. Zero sets are unchanged.
Expr normalize_condition(const Expr& e);

}  // namespace degenlag
