#pragma once

#include <cstddef>
#include <vector>

#include "degenlag/chart.hpp"
#include "degenlag/compiled.hpp"
#include "degenlag/expr.hpp"
#include "degenlag/linalg.hpp"

namespace degenlag {

/// Coordinate 2-form  w = sum_{i<j} M_ij dx^i ^ dx^j.
///
/// Only the strict upper triangle is stored, so M_ij = -M_ji and M_ii = 0
/// hold by construction.
class TwoForm {
public:
    explicit TwoForm(Chart chart);

    const Chart& chart() const { return chart_; }
    std::size_t size() const { return chart_.size(); }

    Expr operator()(std::size_t i, std::size_t j) const;
    /// Sets M_ij (and therefore M_ji = -value). Requires i != j.
    void set(std::size_t i, std::size_t j, Expr value);

    /// Covector (i_X w)_j = sum_i X^i M_ij.
    ExprVector contract(const ExprVector& x) const;

    bool is_constant() const;
    bool is_structurally_zero() const;

    /// Full antisymmetric matrix, row-major.
    std::vector<ExprVector> matrix() const;

private:
    std::size_t slot(std::size_t i, std::size_t j) const;
    Chart chart_;
    ExprVector upper_;
};

/// Components of df in the chart.
ExprVector differential(const Expr& f, const Chart& chart);

/// d(sum_i theta_i dx^i) = sum_{i<j} (d_i theta_j - d_j theta_i) dx^i ^ dx^j.
TwoForm exterior_derivative(const ExprVector& one_form, const Chart& chart);

/// Coordinate 1-form pullback along x = phi(y): (phi^* theta)_A = sum_i theta_i(phi(y)) d phi^i / d y^A.
/// `map` expresses every coordinate of the form's chart in terms of the target chart.
ExprVector pullback_one_form(const ExprVector& theta, const Chart& source, const ExprVector& map, const Chart& target);

/// 2-form pullback along x = phi(y).
TwoForm pullback(const TwoForm& omega, const ExprVector& map, const Chart& target);

/// Expression matrix compiled for repeated numeric evaluation.
class CompiledMatrix {
public:
    CompiledMatrix() = default;
    CompiledMatrix(const std::vector<ExprVector>& rows, const Chart& chart);
    Eigen::Index rows() const { return rows_; }
    Eigen::Index cols() const { return cols_; }
    /// Throws DomainError like evaluate().
    Matrix operator()(std::span<const double> x) const;

private:
    Eigen::Index rows_ = 0;
    Eigen::Index cols_ = 0;
    std::vector<CompiledExpr> entries_;
    std::vector<bool> zero_;
};

}  // namespace degenlag
