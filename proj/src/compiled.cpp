#include "degenlag/compiled.hpp"

#include <cmath>
#include <limits>

#include "degenlag/error.hpp"

namespace degenlag {

CompiledExpr::CompiledExpr(const Expr& e, const Chart& chart) { emit(e, chart, 1); }

void CompiledExpr::emit(const Expr& e, const Chart& chart, int depth) {
    using Kind = Expr::Kind;
    if (depth > max_depth_) max_depth_ = depth;
    switch (e.kind()) {
        case Kind::Constant: code_.push_back({Op::Const, 0, e.value().to_double()}); return;
        case Kind::Variable: {
            auto idx = chart.index_of(e.name());
            if (!idx) throw MissingCoordinate(e.name());
            code_.push_back({Op::Var, static_cast<int>(*idx), 0.0});
            return;
        }
        default: break;
    }
    emit(e.child(0), chart, depth);
    if (e.arity() == 2) emit(e.child(1), chart, depth + 1);
    Op op = Op::Const;
    switch (e.kind()) {
        case Kind::Add: op = Op::Add; break;
        case Kind::Sub: op = Op::Sub; break;
        case Kind::Mul: op = Op::Mul; break;
        case Kind::Div: op = Op::Div; break;
        case Kind::Pow: op = Op::Pow; break;
        case Kind::Neg: op = Op::Neg; break;
        case Kind::Sin: op = Op::Sin; break;
        case Kind::Cos: op = Op::Cos; break;
        case Kind::Exp: op = Op::Exp; break;
        case Kind::Log: op = Op::Log; break;
        case Kind::Sqrt: op = Op::Sqrt; break;
        default: break;
    }
    code_.push_back({op, e.kind() == Kind::Pow ? e.exponent() : 0, 0.0});
}

template <bool Throw>
double CompiledExpr::run(std::span<const double> x) const {
    constexpr int kInline = 32;
    double inline_stack[kInline];
    std::vector<double> heap;
    double* stack = inline_stack;
    if (max_depth_ > kInline) {
        heap.resize(static_cast<std::size_t>(max_depth_));
        stack = heap.data();
    }
    auto fail = [](const char* what) -> double {
        if constexpr (Throw) {
            throw DomainError(what);
        }
        return std::numeric_limits<double>::quiet_NaN();
    };
    int top = -1;
    for (const Instr& in : code_) {
        switch (in.op) {
            case Op::Const: stack[++top] = in.value; break;
            case Op::Var: stack[++top] = x[static_cast<std::size_t>(in.arg)]; break;
            case Op::Add: stack[top - 1] += stack[top]; --top; break;
            case Op::Sub: stack[top - 1] -= stack[top]; --top; break;
            case Op::Mul: stack[top - 1] *= stack[top]; --top; break;
            case Op::Div:
                if (stack[top] == 0.0) return fail("division by zero");
                stack[top - 1] /= stack[top];
                --top;
                break;
            case Op::Pow:
                if (stack[top] == 0.0 && in.arg < 0) return fail("zero raised to a negative power");
                stack[top] = std::pow(stack[top], in.arg);
                break;
            case Op::Neg: stack[top] = -stack[top]; break;
            case Op::Sin: stack[top] = std::sin(stack[top]); break;
            case Op::Cos: stack[top] = std::cos(stack[top]); break;
            case Op::Exp: stack[top] = std::exp(stack[top]); break;
            case Op::Log:
                if (!(stack[top] > 0.0)) return fail("log of non-positive value");
                stack[top] = std::log(stack[top]);
                break;
            case Op::Sqrt:
                if (stack[top] < 0.0) return fail("sqrt of negative value");
                stack[top] = std::sqrt(stack[top]);
                break;
        }
    }
    return code_.empty() ? 0.0 : stack[0];
}

double CompiledExpr::operator()(std::span<const double> x) const { return run<true>(x); }
double CompiledExpr::eval_or_nan(std::span<const double> x) const noexcept { return run<false>(x); }

CompiledVector::CompiledVector(const ExprVector& exprs, const Chart& chart) {
    items_.reserve(exprs.size());
    for (const Expr& e : exprs) items_.emplace_back(e, chart);
}

void CompiledVector::operator()(std::span<const double> x, std::span<double> out) const {
    for (std::size_t i = 0; i < items_.size(); ++i) out[i] = items_[i](x);
}

std::vector<double> CompiledVector::operator()(std::span<const double> x) const {
    std::vector<double> out(items_.size());
    (*this)(x, out);
    return out;
}

CompiledJacobian::CompiledJacobian(const ExprVector& exprs, const Chart& chart)
    : rows_(exprs.size()), cols_(chart.size()) {
    entries_.reserve(rows_ * cols_);
    zero_.reserve(rows_ * cols_);
    for (const Expr& e : exprs) {
        for (std::size_t j = 0; j < cols_; ++j) {
            Expr d = differentiate(e, chart.name(j));
            zero_.push_back(d.is_zero());
            entries_.emplace_back(d, chart);
        }
    }
}

void CompiledJacobian::operator()(std::span<const double> x, std::span<double> out) const {
    for (std::size_t k = 0; k < entries_.size(); ++k) out[k] = zero_[k] ? 0.0 : entries_[k](x);
}

std::vector<double> to_array(const Point& point, const Chart& chart) {
    std::vector<double> x(chart.size());
    for (std::size_t i = 0; i < chart.size(); ++i) {
        auto it = point.find(chart.name(i));
        if (it == point.end()) throw MissingCoordinate(chart.name(i));
        x[i] = it->second;
    }
    return x;
}

Point to_point(std::span<const double> x, const Chart& chart) {
    Point p;
    for (std::size_t i = 0; i < chart.size(); ++i) p[chart.name(i)] = x[i];
    return p;
}

}  // namespace degenlag
