#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "degenlag/chart.hpp"
#include "degenlag/expr.hpp"

namespace degenlag {

/// Flattened postfix program for fast repeated evaluation of an Expr at
/// points given as coordinate arrays ordered like the chart.
class CompiledExpr {
public:
    CompiledExpr() = default;
    /// Throws MissingCoordinate if `e` references a name not in `chart`.
    CompiledExpr(const Expr& e, const Chart& chart);

    /// Throws DomainError like evaluate().
    double operator()(std::span<const double> x) const;

    /// NaN instead of throwing when the point is outside the domain.
    double eval_or_nan(std::span<const double> x) const noexcept;

private:
    enum class Op : std::uint8_t { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log, Sqrt };
    struct Instr {
        Op op;
        int arg;
        double value;
    };
    void emit(const Expr& e, const Chart& chart, int depth);
    template <bool Throw>
    double run(std::span<const double> x) const;

    std::vector<Instr> code_;
    int max_depth_ = 0;
};

/// A vector of compiled expressions sharing one chart.
class CompiledVector {
public:
    CompiledVector() = default;
    CompiledVector(const ExprVector& exprs, const Chart& chart);

    std::size_t size() const { return items_.size(); }
    void operator()(std::span<const double> x, std::span<double> out) const;
    std::vector<double> operator()(std::span<const double> x) const;
    const CompiledExpr& operator[](std::size_t i) const { return items_[i]; }

private:
    std::vector<CompiledExpr> items_;
};

/// Row-major symbolic Jacobian d(exprs[i])/d(chart[j]), compiled.
class CompiledJacobian {
public:
    CompiledJacobian() = default;
    CompiledJacobian(const ExprVector& exprs, const Chart& chart);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    /// Fills `out` (rows * cols, row-major).
    void operator()(std::span<const double> x, std::span<double> out) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<CompiledExpr> entries_;
    std::vector<bool> zero_;
};

/// Convert between the map form and the chart-ordered array form of a point.
std::vector<double> to_array(const Point& point, const Chart& chart);
Point to_point(std::span<const double> x, const Chart& chart);

}  // namespace degenlag
