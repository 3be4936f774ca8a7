#pragma once

#include <Eigen/Dense>

namespace degenlag {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct LeastSquares {
    Vector x;           ///< minimum-norm least-squares solution
    double residual;    ///< ||A x - b||_inf
    Eigen::Index rank;
};

/// Minimum-norm least squares via SVD; singular values below
/// `rank_tol * max(1, sigma_max)` are treated as zero.
LeastSquares solve_least_squares(const Matrix& a, const Vector& b, double rank_tol = 1e-10);

Eigen::Index numeric_rank(const Matrix& a, double rank_tol = 1e-10);

/// Orthonormal basis of ker(a) as columns.
Matrix null_space(const Matrix& a, double rank_tol = 1e-10);

}  // namespace degenlag
