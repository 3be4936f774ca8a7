#include "degenlag/solution.hpp"

#include "degenlag/error.hpp"

namespace degenlag {

ExprVector SolutionFamily::member(const ExprVector& lambda) const {
    if (lambda.size() != null_basis.size()) throw DimensionMismatch("solution family: wrong number of parameters");
    ExprVector x = particular;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (lambda[i].is_zero()) continue;
        for (std::size_t j = 0; j < x.size(); ++j) {
            if (!null_basis[i][j].is_zero()) x[j] = x[j] + lambda[i] * null_basis[i][j];
        }
    }
    return x;
}

}  // namespace degenlag
