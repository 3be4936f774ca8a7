#include <algorithm>
#include <optional>
#include <stdexcept>

#include "degenlag/expr.hpp"

namespace degenlag {

namespace {

using Monomial = std::map<std::string, int>;
using Poly = std::map<Monomial, Rational>;

void accumulate(Poly& p, const Monomial& m, const Rational& c) {
    Rational& slot = p[m];
    slot = slot + c;
    if (slot.is_zero()) p.erase(m);
}

Poly multiply(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& [ma, ca] : a) {
        for (const auto& [mb, cb] : b) {
            Monomial m = ma;
            for (const auto& [v, k] : mb) m[v] += k;
            accumulate(out, m, ca * cb);
        }
    }
    return out;
}

std::optional<Poly> to_poly(const Expr& e) {
    using K = Expr::Kind;
    switch (e.kind()) {
        case K::Constant: {
            Poly p;
            if (!e.value().is_zero()) p[{}] = e.value();
            return p;
        }
        case K::Variable: return Poly{{Monomial{{e.name(), 1}}, Rational(1)}};
        case K::Neg: {
            auto a = to_poly(e.child(0));
            if (!a) return std::nullopt;
            for (auto& [m, c] : *a) c = -c;
            return a;
        }
        case K::Add:
        case K::Sub: {
            auto a = to_poly(e.child(0));
            auto b = to_poly(e.child(1));
            if (!a || !b) return std::nullopt;
            const Rational sign = e.kind() == K::Add ? Rational(1) : Rational(-1);
            for (const auto& [m, c] : *b) accumulate(*a, m, sign * c);
            return a;
        }
        case K::Mul: {
            auto a = to_poly(e.child(0));
            auto b = to_poly(e.child(1));
            if (!a || !b) return std::nullopt;
            return multiply(*a, *b);
        }
        case K::Div: {
            if (!e.child(1).is_constant()) return std::nullopt;
            auto a = to_poly(e.child(0));
            if (!a) return std::nullopt;
            for (auto& [m, c] : *a) c = c / e.child(1).value();
            return a;
        }
        case K::Pow: {
            if (e.exponent() < 0 || e.exponent() > 16) return std::nullopt;
            auto base = to_poly(e.child(0));
            if (!base) return std::nullopt;
            Poly out{{Monomial{}, Rational(1)}};
            for (int i = 0; i < e.exponent(); ++i) out = multiply(out, *base);
            return out;
        }
        default: return std::nullopt;
    }
}

int degree(const Monomial& m) {
    int d = 0;
    for (const auto& [v, k] : m) d += k;
    return d;
}

}  // namespace

Expr collect_terms(const Expr& e) {
    std::optional<Poly> p;
    try {
        p = to_poly(e);
    } catch (const std::exception&) {  // coefficient overflow
        return e;
    }
    if (!p) return e;
    std::vector<std::pair<Monomial, Rational>> terms(p->begin(), p->end());
    std::stable_sort(terms.begin(), terms.end(),
                     [](const auto& a, const auto& b) { return degree(a.first) > degree(b.first); });
    Expr out;
    bool first = true;
    for (const auto& [m, c] : terms) {
        const bool negative = c < Rational(0);
        Expr term(negative ? -c : c);
        for (const auto& [v, k] : m) term = term * pow(Expr::variable(v), k);
        if (first) {
            out = negative ? -term : term;
            first = false;
        } else {
            out = negative ? out - term : out + term;
        }
    }
    return out;
}

}  // namespace degenlag
