#pragma once

#include <cstddef>
#include <vector>

#include "degenlag/expr.hpp"

namespace degenlag {

/// General solution of i_X Omega = alpha on a constraint level:
/// X = particular + sum_i lambda_i null_basis[i], lambda_i arbitrary functions.
struct SolutionFamily {
    ExprVector particular;
    std::vector<ExprVector> null_basis;
    std::size_t validity_level = 0;  ///< 1-based chain level on which the family is valid

    /// particular + sum_i lambda[i] * null_basis[i]
    ExprVector member(const ExprVector& lambda) const;
};

}  // namespace degenlag
