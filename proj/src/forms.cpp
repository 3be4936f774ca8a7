#include "degenlag/forms.hpp"

#include <map>

#include "degenlag/error.hpp"

namespace degenlag {

TwoForm::TwoForm(Chart chart) : chart_(std::move(chart)), upper_(chart_.size() * chart_.size()) {}

std::size_t TwoForm::slot(std::size_t i, std::size_t j) const { return i * chart_.size() + j; }

Expr TwoForm::operator()(std::size_t i, std::size_t j) const {
    if (i == j) return Expr();
    if (i < j) return upper_[slot(i, j)];
    return -upper_[slot(j, i)];
}

void TwoForm::set(std::size_t i, std::size_t j, Expr value) {
    if (i == j) throw std::invalid_argument("two-form: diagonal coefficient is always zero");
    if (i < j) {
        upper_[slot(i, j)] = std::move(value);
    } else {
        upper_[slot(j, i)] = -value;
    }
}

ExprVector TwoForm::contract(const ExprVector& x) const {
    if (x.size() != size()) throw DimensionMismatch("two-form contraction: vector has wrong length");
    ExprVector out(size());
    for (std::size_t j = 0; j < size(); ++j) {
        Expr acc;
        for (std::size_t i = 0; i < size(); ++i) {
            if (i == j || x[i].is_zero()) continue;
            acc = acc + x[i] * (*this)(i, j);
        }
        out[j] = acc;
    }
    return out;
}

bool TwoForm::is_constant() const {
    for (const Expr& e : upper_) {
        if (!e.is_constant()) return false;
    }
    return true;
}

bool TwoForm::is_structurally_zero() const {
    for (const Expr& e : upper_) {
        if (!e.is_zero()) return false;
    }
    return true;
}

std::vector<ExprVector> TwoForm::matrix() const {
    std::vector<ExprVector> m(size(), ExprVector(size()));
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < size(); ++j) m[i][j] = (*this)(i, j);
    }
    return m;
}

ExprVector differential(const Expr& f, const Chart& chart) {
    ExprVector out;
    out.reserve(chart.size());
    for (const auto& name : chart.names()) out.push_back(differentiate(f, name));
    return out;
}

TwoForm exterior_derivative(const ExprVector& one_form, const Chart& chart) {
    if (one_form.size() != chart.size()) throw DimensionMismatch("exterior derivative: 1-form has wrong length");
    TwoForm out(chart);
    for (std::size_t i = 0; i < chart.size(); ++i) {
        for (std::size_t j = i + 1; j < chart.size(); ++j) {
            out.set(i, j, differentiate(one_form[j], chart.name(i)) - differentiate(one_form[i], chart.name(j)));
        }
    }
    return out;
}

namespace {

std::map<std::string, Expr> bindings_for(const Chart& source, const ExprVector& map) {
    if (map.size() != source.size()) throw DimensionMismatch("pullback: map has wrong number of components");
    std::map<std::string, Expr> b;
    for (std::size_t i = 0; i < source.size(); ++i) b[source.name(i)] = map[i];
    return b;
}

}  // namespace

ExprVector pullback_one_form(const ExprVector& theta, const Chart& source, const ExprVector& map, const Chart& target) {
    if (theta.size() != source.size()) throw DimensionMismatch("pullback: 1-form has wrong length");
    const auto b = bindings_for(source, map);
    ExprVector out(target.size());
    for (std::size_t a = 0; a < target.size(); ++a) {
        Expr acc;
        for (std::size_t i = 0; i < source.size(); ++i) {
            const Expr dphi = differentiate(map[i], target.name(a));
            if (dphi.is_zero() || theta[i].is_zero()) continue;
            acc = acc + substitute(theta[i], b) * dphi;
        }
        out[a] = acc;
    }
    return out;
}

TwoForm pullback(const TwoForm& omega, const ExprVector& map, const Chart& target) {
    const Chart& source = omega.chart();
    const auto b = bindings_for(source, map);
    // jac[i][a] = d phi^i / d y^a
    std::vector<ExprVector> jac(source.size(), ExprVector(target.size()));
    for (std::size_t i = 0; i < source.size(); ++i) {
        for (std::size_t a = 0; a < target.size(); ++a) jac[i][a] = differentiate(map[i], target.name(a));
    }
    std::vector<Expr> coeff(source.size() * source.size());
    for (std::size_t i = 0; i < source.size(); ++i) {
        for (std::size_t j = i + 1; j < source.size(); ++j) coeff[i * source.size() + j] = substitute(omega(i, j), b);
    }
    TwoForm out(target);
    for (std::size_t a = 0; a < target.size(); ++a) {
        for (std::size_t c = a + 1; c < target.size(); ++c) {
            // (phi^* w)_{ac} = sum_{i<j} M_ij (J_ia J_jc - J_ja J_ic)
            Expr acc;
            for (std::size_t i = 0; i < source.size(); ++i) {
                for (std::size_t j = i + 1; j < source.size(); ++j) {
                    const Expr& m = coeff[i * source.size() + j];
                    if (m.is_zero()) continue;
                    const Expr minor = jac[i][a] * jac[j][c] - jac[j][a] * jac[i][c];
                    if (minor.is_zero()) continue;
                    acc = acc + m * minor;
                }
            }
            out.set(a, c, acc);
        }
    }
    return out;
}

CompiledMatrix::CompiledMatrix(const std::vector<ExprVector>& rows, const Chart& chart)
    : rows_(static_cast<Eigen::Index>(rows.size())), cols_(rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size())) {
    for (const auto& row : rows) {
        if (static_cast<Eigen::Index>(row.size()) != cols_) throw DimensionMismatch("compiled matrix: ragged rows");
        for (const Expr& e : row) {
            zero_.push_back(e.is_zero());
            entries_.emplace_back(e.is_zero() ? Expr() : e, chart);
        }
    }
}

Matrix CompiledMatrix::operator()(std::span<const double> x) const {
    Matrix m = Matrix::Zero(rows_, cols_);
    for (Eigen::Index r = 0; r < rows_; ++r) {
        for (Eigen::Index c = 0; c < cols_; ++c) {
            const auto k = static_cast<std::size_t>(r * cols_ + c);
            if (!zero_[k]) m(r, c) = entries_[k](x);
        }
    }
    return m;
}

}  // namespace degenlag
