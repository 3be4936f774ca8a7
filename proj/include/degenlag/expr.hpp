#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "degenlag/rational.hpp"

namespace degenlag {

struct ExprNode;

/// Immutable symbolic expression tree.
///
/// Coordinates are referenced by name; the Chart they resolve against is
/// supplied at parse, compile and zero-test time. Construction through the
/// operators below applies a small fixed set of rewrites (constant folding,
/// 0/1 identities, x - x -> 0, sign normalisation) and nothing else.
class Expr {
public:
    enum class Kind { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp, Log, Sqrt };

    Expr();  ///< the constant 0
    Expr(Rational value);  // NOLINT(google-explicit-constructor)
    Expr(std::int64_t value) : Expr(Rational(value)) {}  // NOLINT(google-explicit-constructor)
    Expr(int value) : Expr(Rational(value)) {}  // NOLINT(google-explicit-constructor)

    static Expr variable(const std::string& name);

    Kind kind() const;
    const Rational& value() const;     ///< Constant only
    const std::string& name() const;   ///< Variable only
    int exponent() const;              ///< Pow only
    std::size_t arity() const;
    const Expr& child(std::size_t i) const;

    bool is_constant() const { return kind() == Kind::Constant; }
    bool is_zero() const;
    bool is_one() const;

    std::string to_string() const;
    std::size_t node_count() const;
    std::set<std::string> variables() const;
    bool depends_on(const std::string& name) const;

    friend bool operator==(const Expr& a, const Expr& b);  ///< structural equality

private:
    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
    friend Expr make_node(Kind, Expr, Expr, int);
    friend struct ExprNode;
    std::shared_ptr<const ExprNode> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, int exponent);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr sqrt(const Expr& a);

/// Exact partial derivative with respect to the named coordinate.
Expr differentiate(const Expr& e, const std::string& coord);

/// Replaces every variable found in `bindings` by its bound expression.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

/// Collects like terms when `e` is a polynomial with rational coefficients
/// (division by constants allowed); any other expression is returned as is.
Expr collect_terms(const Expr& e);

using Point = std::map<std::string, double>;

/// IEEE double evaluation. Throws DomainError or MissingCoordinate.
double evaluate(const Expr& e, const Point& point);

using ExprVector = std::vector<Expr>;

}  // namespace degenlag
