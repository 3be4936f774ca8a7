#include "degenlag/linalg.hpp"

#include <algorithm>

namespace degenlag {

namespace {

double threshold(const Eigen::JacobiSVD<Matrix>& svd, double rank_tol) {
    const auto& s = svd.singularValues();
    const double top = s.size() > 0 ? s(0) : 0.0;
    return rank_tol * std::max(1.0, top);
}

Eigen::Index rank_of(const Eigen::JacobiSVD<Matrix>& svd, double cut) {
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()(i) > cut) ++r;
    }
    return r;
}

}  // namespace

LeastSquares solve_least_squares(const Matrix& a, const Vector& b, double rank_tol) {
    if (a.rows() == 0 || a.cols() == 0) {
        return {Vector::Zero(a.cols()), b.size() ? b.cwiseAbs().maxCoeff() : 0.0, 0};
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double cut = threshold(svd, rank_tol);
    const Eigen::Index r = rank_of(svd, cut);
    Vector x = Vector::Zero(a.cols());
    for (Eigen::Index i = 0; i < r; ++i) {
        x += svd.matrixV().col(i) * (svd.matrixU().col(i).dot(b) / svd.singularValues()(i));
    }
    const Vector res = a * x - b;
    return {x, res.size() ? res.cwiseAbs().maxCoeff() : 0.0, r};
}

Eigen::Index numeric_rank(const Matrix& a, double rank_tol) {
    if (a.rows() == 0 || a.cols() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return rank_of(svd, threshold(svd, rank_tol));
}

Matrix null_space(const Matrix& a, double rank_tol) {
    if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
    const Eigen::Index r = rank_of(svd, threshold(svd, rank_tol));
    return svd.matrixV().rightCols(a.cols() - r);
}

}  // namespace degenlag
