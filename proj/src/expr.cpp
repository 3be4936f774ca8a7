#include "degenlag/expr.hpp"

#include <cmath>
#include <functional>

#include "degenlag/error.hpp"

namespace degenlag {

struct ExprNode {
    Expr::Kind kind = Expr::Kind::Constant;
    Rational value;
    std::string name;
    int exponent = 0;
    // Null until set, so that building the shared zero node does not recurse.
    Expr a{std::shared_ptr<const ExprNode>()};
    Expr b{std::shared_ptr<const ExprNode>()};
    std::size_t arity = 0;
};

namespace {

using Kind = Expr::Kind;

const std::shared_ptr<const ExprNode>& zero_node() {
    static const auto node = std::make_shared<const ExprNode>();
    return node;
}

bool is_unary_function(Kind k) {
    return k == Kind::Sin || k == Kind::Cos || k == Kind::Exp || k == Kind::Log || k == Kind::Sqrt;
}

}  // namespace

Expr make_node(Kind kind, Expr a, Expr b, int exponent) {
    auto node = std::make_shared<ExprNode>();
    node->kind = kind;
    node->exponent = exponent;
    switch (kind) {
        case Kind::Add:
        case Kind::Sub:
        case Kind::Mul:
        case Kind::Div:
            node->arity = 2;
            node->a = std::move(a);
            node->b = std::move(b);
            break;
        default:
            node->arity = 1;
            node->a = std::move(a);
            break;
    }
    return Expr(std::shared_ptr<const ExprNode>(std::move(node)));
}

Expr::Expr() : node_(zero_node()) {}

Expr::Expr(Rational value) {
    if (value.is_zero()) {
        node_ = zero_node();
        return;
    }
    auto node = std::make_shared<ExprNode>();
    node->kind = Kind::Constant;
    node->value = value;
    node_ = std::move(node);
}

Expr Expr::variable(const std::string& name) {
    auto node = std::make_shared<ExprNode>();
    node->kind = Kind::Variable;
    node->name = name;
    return Expr(std::shared_ptr<const ExprNode>(std::move(node)));
}

Expr::Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
int Expr::exponent() const { return node_->exponent; }
std::size_t Expr::arity() const { return node_->arity; }
const Expr& Expr::child(std::size_t i) const { return i == 0 ? node_->a : node_->b; }
bool Expr::is_zero() const { return kind() == Kind::Constant && value().is_zero(); }
bool Expr::is_one() const { return kind() == Kind::Constant && value().is_one(); }

bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Kind::Constant: return a.value() == b.value();
        case Kind::Variable: return a.name() == b.name();
        case Kind::Pow: return a.exponent() == b.exponent() && a.child(0) == b.child(0);
        default: break;
    }
    if (a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i) {
        if (!(a.child(i) == b.child(i))) return false;
    }
    return true;
}

std::size_t Expr::node_count() const {
    std::size_t count = 1;
    for (std::size_t i = 0; i < arity(); ++i) count += child(i).node_count();
    return count;
}

std::set<std::string> Expr::variables() const {
    std::set<std::string> out;
    std::function<void(const Expr&)> walk = [&](const Expr& e) {
        if (e.kind() == Kind::Variable) out.insert(e.name());
        for (std::size_t i = 0; i < e.arity(); ++i) walk(e.child(i));
    };
    walk(*this);
    return out;
}

bool Expr::depends_on(const std::string& name) const {
    if (kind() == Kind::Variable) return this->name() == name;
    for (std::size_t i = 0; i < arity(); ++i) {
        if (child(i).depends_on(name)) return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Simplifying constructors

Expr operator-(const Expr& a) {
    switch (a.kind()) {
        case Kind::Constant: return Expr(-a.value());
        case Kind::Neg: return a.child(0);
        case Kind::Sub: return make_node(Kind::Sub, a.child(1), a.child(0), 0);
        case Kind::Mul:
            if (a.child(0).is_constant()) return Expr(-a.child(0).value()) * a.child(1);
            break;
        default: break;
    }
    return make_node(Kind::Neg, a, Expr(), 0);
}

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr(a.value() + b.value());
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (b.kind() == Kind::Neg) return a - b.child(0);
    if (b.is_constant() && b.value() < Rational(0)) return a - Expr(-b.value());
    if (a.kind() == Kind::Neg) return b - a.child(0);
    return make_node(Kind::Add, a, b, 0);
}

Expr operator-(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr(a.value() - b.value());
    if (b.is_zero()) return a;
    if (a.is_zero()) return -b;
    if (a == b) return Expr();
    if (b.kind() == Kind::Neg) return a + b.child(0);
    if (b.is_constant() && b.value() < Rational(0)) return a + Expr(-b.value());
    return make_node(Kind::Sub, a, b, 0);
}

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_constant() && b.is_constant()) return Expr(a.value() * b.value());
    if (a.is_zero() || b.is_zero()) return Expr();
    if (a.is_one()) return b;
    if (b.is_one()) return a;
    if (b.is_constant()) return b * a;
    if (a.is_constant()) {
        if (a.value().is_minus_one()) return -b;
        if (b.kind() == Kind::Mul && b.child(0).is_constant()) return Expr(a.value() * b.child(0).value()) * b.child(1);
        if (b.kind() == Kind::Neg) return Expr(-a.value()) * b.child(0);
    }
    if (a.kind() == Kind::Neg) return -(a.child(0) * b);
    if (b.kind() == Kind::Neg) return -(a * b.child(0));
    return make_node(Kind::Mul, a, b, 0);
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_one()) return a;
    if (b.is_constant() && !b.is_zero()) {
        if (a.is_constant()) return Expr(a.value() / b.value());
        return Expr(Rational(1) / b.value()) * a;
    }
    if (a.is_zero() && !b.is_zero()) return Expr();
    if (a.kind() == Kind::Neg) return -(a.child(0) / b);
    if (b.kind() == Kind::Neg) return -(a / b.child(0));
    return make_node(Kind::Div, a, b, 0);
}

Expr pow(const Expr& base, int exponent) {
    if (exponent == 0) return Expr(1);
    if (exponent == 1) return base;
    if (base.is_constant() && !(base.is_zero() && exponent < 0)) return Expr(base.value().pow(exponent));
    if (base.kind() == Kind::Pow) {
        long long combined = static_cast<long long>(base.exponent()) * exponent;
        if (combined >= -1000 && combined <= 1000) return pow(base.child(0), static_cast<int>(combined));
    }
    return make_node(Kind::Pow, base, Expr(), exponent);
}

Expr sin(const Expr& a) {
    if (a.is_zero()) return Expr();
    return make_node(Kind::Sin, a, Expr(), 0);
}

Expr cos(const Expr& a) {
    if (a.is_zero()) return Expr(1);
    return make_node(Kind::Cos, a, Expr(), 0);
}

Expr exp(const Expr& a) {
    if (a.is_zero()) return Expr(1);
    return make_node(Kind::Exp, a, Expr(), 0);
}

Expr log(const Expr& a) {
    if (a.is_one()) return Expr();
    return make_node(Kind::Log, a, Expr(), 0);
}

Expr sqrt(const Expr& a) {
    if (a.is_zero() || a.is_one()) return a;
    return make_node(Kind::Sqrt, a, Expr(), 0);
}

// ---------------------------------------------------------------------------

Expr differentiate(const Expr& e, const std::string& coord) {
    switch (e.kind()) {
        case Kind::Constant: return Expr();
        case Kind::Variable: return e.name() == coord ? Expr(1) : Expr();
        default: break;
    }
    if (!e.depends_on(coord)) return Expr();
    const Expr& a = e.child(0);
    const Expr da = differentiate(a, coord);
    switch (e.kind()) {
        case Kind::Add: return da + differentiate(e.child(1), coord);
        case Kind::Sub: return da - differentiate(e.child(1), coord);
        case Kind::Mul: {
            const Expr& b = e.child(1);
            return da * b + a * differentiate(b, coord);
        }
        case Kind::Div: {
            const Expr& b = e.child(1);
            const Expr db = differentiate(b, coord);
            if (db.is_zero()) return da / b;
            return (da * b - a * db) / pow(b, 2);
        }
        case Kind::Pow: return Expr(e.exponent()) * pow(a, e.exponent() - 1) * da;
        case Kind::Neg: return -da;
        case Kind::Sin: return cos(a) * da;
        case Kind::Cos: return -(sin(a) * da);
        case Kind::Exp: return e * da;
        case Kind::Log: return da / a;
        case Kind::Sqrt: return da / (Expr(2) * e);
        default: break;
    }
    return Expr();
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
    switch (e.kind()) {
        case Kind::Constant: return e;
        case Kind::Variable: {
            auto it = bindings.find(e.name());
            return it == bindings.end() ? e : it->second;
        }
        case Kind::Add: return substitute(e.child(0), bindings) + substitute(e.child(1), bindings);
        case Kind::Sub: return substitute(e.child(0), bindings) - substitute(e.child(1), bindings);
        case Kind::Mul: return substitute(e.child(0), bindings) * substitute(e.child(1), bindings);
        case Kind::Div: return substitute(e.child(0), bindings) / substitute(e.child(1), bindings);
        case Kind::Pow: return pow(substitute(e.child(0), bindings), e.exponent());
        case Kind::Neg: return -substitute(e.child(0), bindings);
        case Kind::Sin: return sin(substitute(e.child(0), bindings));
        case Kind::Cos: return cos(substitute(e.child(0), bindings));
        case Kind::Exp: return exp(substitute(e.child(0), bindings));
        case Kind::Log: return log(substitute(e.child(0), bindings));
        case Kind::Sqrt: return sqrt(substitute(e.child(0), bindings));
    }
    return e;
}

double evaluate(const Expr& e, const Point& point) {
    switch (e.kind()) {
        case Kind::Constant: return e.value().to_double();
        case Kind::Variable: {
            auto it = point.find(e.name());
            if (it == point.end()) throw MissingCoordinate(e.name());
            return it->second;
        }
        default: break;
    }
    const double a = evaluate(e.child(0), point);
    switch (e.kind()) {
        case Kind::Add: return a + evaluate(e.child(1), point);
        case Kind::Sub: return a - evaluate(e.child(1), point);
        case Kind::Mul: return a * evaluate(e.child(1), point);
        case Kind::Div: {
            const double b = evaluate(e.child(1), point);
            if (b == 0.0) throw DomainError("division by zero");
            return a / b;
        }
        case Kind::Pow:
            if (a == 0.0 && e.exponent() < 0) throw DomainError("zero raised to a negative power");
            return std::pow(a, e.exponent());
        case Kind::Neg: return -a;
        case Kind::Sin: return std::sin(a);
        case Kind::Cos: return std::cos(a);
        case Kind::Exp: return std::exp(a);
        case Kind::Log:
            if (!(a > 0.0)) throw DomainError("log of non-positive value");
            return std::log(a);
        case Kind::Sqrt:
            if (a < 0.0) throw DomainError("sqrt of negative value");
            return std::sqrt(a);
        default: break;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Printing. Precedence levels: 1 additive, 2 multiplicative, 3 unary minus,
// 4 power, 5 atoms.

namespace {

int precedence(const Expr& e) {
    switch (e.kind()) {
        case Kind::Constant:
            if (e.value() < Rational(0)) return 3;
            return e.value().is_integer() ? 5 : 2;
        case Kind::Variable: return 5;
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

const char* function_name(Kind k) {
    switch (k) {
        case Kind::Sin: return "sin";
        case Kind::Cos: return "cos";
        case Kind::Exp: return "exp";
        case Kind::Log: return "log";
        case Kind::Sqrt: return "sqrt";
        default: return "?";
    }
}

void print(const Expr& e, std::string& out);

void print_wrapped(const Expr& e, bool wrap, std::string& out) {
    if (wrap) out += '(';
    print(e, out);
    if (wrap) out += ')';
}

void print(const Expr& e, std::string& out) {
    const Kind k = e.kind();
    switch (k) {
        case Kind::Constant: out += e.value().to_string(); return;
        case Kind::Variable: out += e.name(); return;
        case Kind::Neg:
            out += '-';
            print_wrapped(e.child(0), precedence(e.child(0)) < 4, out);
            return;
        case Kind::Pow:
            print_wrapped(e.child(0), precedence(e.child(0)) < 5, out);
            out += '^';
            if (e.exponent() < 0) {
                out += "(" + std::to_string(e.exponent()) + ")";
            } else {
                out += std::to_string(e.exponent());
            }
            return;
        default: break;
    }
    if (is_unary_function(k)) {
        out += function_name(k);
        out += '(';
        print(e.child(0), out);
        out += ')';
        return;
    }
    const int p = precedence(e);
    const char* op = k == Kind::Add ? " + " : k == Kind::Sub ? " - " : k == Kind::Mul ? "*" : "/";
    // Left operand: parenthesise if strictly looser; right operand: if not tighter
    // (operators are left-associative). Negative constants and negations on the
    // right are always wrapped for readability.
    print_wrapped(e.child(0), precedence(e.child(0)) < p, out);
    out += op;
    const Expr& rhs = e.child(1);
    print_wrapped(rhs, precedence(rhs) <= p || precedence(rhs) == 3, out);
}

}  // namespace

std::string Expr::to_string() const {
    std::string out;
    print(*this, out);
    return out;
}

}  // namespace degenlag
