#include "degenlag/elimination.hpp"

#include <limits>

#include "degenlag/error.hpp"
#include "degenlag/zero_test.hpp"

namespace degenlag {

Expr normalize_condition(const Expr& e) {
    if (e.kind() == Expr::Kind::Neg) return normalize_condition(e.child(0));
    if (e.kind() == Expr::Kind::Mul && e.child(0).is_constant()) return normalize_condition(e.child(1));
    if (e.kind() == Expr::Kind::Div && e.child(1).is_constant()) return normalize_condition(e.child(0));
    return e;
}

namespace {

class Eliminator {
public:
    Eliminator(const Chart& chart, const PointSet& probes, double tol) : chart_(chart), probes_(probes), tol_(tol) {}

    SignPattern classify(const Expr& e) const { return sign_pattern(e, chart_, probes_, tol_); }

    Expr clean(const Expr& e) const {
        if (e.is_constant() || probes_.empty()) return e;
        return classify(e) == SignPattern::AllZero ? Expr() : e;
    }

private:
    const Chart& chart_;
    const PointSet& probes_;
    double tol_;
};

}  // namespace

EliminationResult eliminate(SymbolicLinearSystem system, const Chart& chart, const PointSet& probes, double tolerance) {
    const std::size_t ncols = system.unknowns;
    const std::size_t nrows = system.rows.size();
    if (system.rhs.size() != nrows) throw DimensionMismatch("elimination: rhs length differs from row count");
    for (const auto& row : system.rows) {
        if (row.size() != ncols) throw DimensionMismatch("elimination: row has wrong length");
    }
    Eliminator el(chart, probes, tolerance);
    auto& a = system.rows;
    auto& b = system.rhs;
    for (auto& row : a) {
        for (auto& e : row) e = el.clean(e);
    }
    // b is kept as is: the particular solution should not depend on which
    // level the probes come from.

    EliminationResult out;
    std::vector<std::size_t> pivot_row_of_col(ncols, std::numeric_limits<std::size_t>::max());
    std::size_t next_row = 0;
    for (std::size_t col = 0; col < ncols && next_row < nrows; ++col) {
        // Prefer constant pivots, then the smallest expression.
        std::size_t best = nrows;
        std::size_t best_cost = std::numeric_limits<std::size_t>::max();
        const Expr* troublesome = nullptr;
        for (std::size_t r = next_row; r < nrows; ++r) {
            const Expr& e = a[r][col];
            if (e.is_zero()) continue;
            const SignPattern s = el.classify(e);
            if (s == SignPattern::AllNonZero) {
                const std::size_t cost = e.is_constant() ? 0 : e.node_count();
                if (cost < best_cost) {
                    best = r;
                    best_cost = cost;
                }
            } else if (s != SignPattern::AllZero && troublesome == nullptr) {
                troublesome = &e;
            }
        }
        if (best == nrows) {
            if (troublesome != nullptr) throw NonConstantRank(troublesome->to_string());
            continue;
        }
        std::swap(a[best], a[next_row]);
        std::swap(b[best], b[next_row]);
        const std::size_t pr = next_row++;
        const Expr pivot = a[pr][col];
        if (!pivot.is_one()) {
            for (std::size_t c = 0; c < ncols; ++c) {
                if (!a[pr][c].is_zero()) a[pr][c] = a[pr][c] / pivot;
            }
            a[pr][col] = Expr(1);
            b[pr] = b[pr] / pivot;
        }
        for (std::size_t r = 0; r < nrows; ++r) {
            if (r == pr || a[r][col].is_zero()) continue;
            const Expr factor = a[r][col];
            for (std::size_t c = 0; c < ncols; ++c) {
                if (c == col) continue;
                if (!a[pr][c].is_zero()) a[r][c] = el.clean(a[r][c] - factor * a[pr][c]);
            }
            a[r][col] = Expr();
            if (!b[pr].is_zero()) b[r] = b[r] - factor * b[pr];
        }
        pivot_row_of_col[col] = pr;
        out.pivot_columns.push_back(col);
    }

    // Rows from next_row on have every coefficient vanishing on the probes.
    for (std::size_t r = next_row; r < nrows; ++r) {
        const Expr rhs = el.clean(b[r]);
        if (rhs.is_zero()) continue;
        out.conditions.push_back(normalize_condition(rhs));
    }

    out.particular.assign(ncols, Expr());
    for (std::size_t col = 0; col < ncols; ++col) {
        const std::size_t pr = pivot_row_of_col[col];
        if (pr == std::numeric_limits<std::size_t>::max()) {
            out.free_columns.push_back(col);
        } else {
            out.particular[col] = collect_terms(b[pr]);
        }
    }
    for (std::size_t f : out.free_columns) {
        ExprVector v(ncols, Expr());
        v[f] = Expr(1);
        for (std::size_t col : out.pivot_columns) v[col] = collect_terms(el.clean(-a[pivot_row_of_col[col]][f]));
        out.null_basis.push_back(std::move(v));
    }
    return out;
}

}  // namespace degenlag
