#include "degenlag/parser.hpp"

#include <cctype>

#include "degenlag/error.hpp"

namespace degenlag {

namespace {

class Parser {
public:
    Parser(std::string_view src, const Chart& chart) : src_(src), chart_(chart) {}

    Expr parse() {
        skip_space();
        if (at_end()) throw ParseError(pos_, "empty expression");
        Expr e = parse_expr();
        skip_space();
        if (!at_end()) throw ParseError(pos_, std::string("unexpected '") + src_[pos_] + "'");
        return e;
    }

private:
    bool at_end() const { return pos_ >= src_.size(); }

    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_space();
        if (!at_end() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) {
                lhs = lhs + parse_term();
            } else if (accept('-')) {
                lhs = lhs - parse_term();
            } else {
                return lhs;
            }
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) {
                lhs = lhs * parse_unary();
            } else if (accept('/')) {
                lhs = lhs / parse_unary();
            } else {
                return lhs;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) return -parse_unary();
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        while (accept('^')) {
            skip_space();
            const std::size_t at = pos_;
            bool negative = false;
            if (accept('-')) {
                negative = true;
            } else {
                accept('+');
            }
            Expr ex = parse_primary();
            if (!ex.is_constant() || !ex.value().is_integer() || ex.value().num() > 1000 || ex.value().num() < -1000) {
                throw ParseError(at, "exponent must be an integer constant");
            }
            int k = static_cast<int>(ex.value().num());
            base = pow(base, negative ? -k : k);
        }
        return base;
    }

    Expr parse_primary() {
        skip_space();
        if (at_end()) throw ParseError(pos_, "expected operand");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr inner = parse_expr();
            if (!accept(')')) throw ParseError(pos_, "expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        throw ParseError(pos_, std::string("unexpected '") + c + "'");
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.')) ++pos_;
        if (!at_end() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                while (!at_end() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            }
        }
        Rational value;
        if (!Rational::from_decimal(src_.substr(start, pos_ - start), value)) {
            throw ParseError(start, "malformed or out-of-range number");
        }
        return Expr(value);
    }

    Expr parse_identifier() {
        const std::size_t start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        const std::string name(src_.substr(start, pos_ - start));
        skip_space();
        if (!at_end() && src_[pos_] == '(') {
            using Fn = Expr (*)(const Expr&);
            Fn fn = nullptr;
            if (name == "sin") fn = &degenlag::sin;
            if (name == "cos") fn = &degenlag::cos;
            if (name == "exp") fn = &degenlag::exp;
            if (name == "log") fn = &degenlag::log;
            if (name == "sqrt") fn = &degenlag::sqrt;
            if (fn == nullptr) throw UnknownIdentifier(start, name);
            ++pos_;
            Expr arg = parse_expr();
            if (!accept(')')) throw ParseError(pos_, "expected ')'");
            return fn(arg);
        }
        if (!chart_.contains(name)) throw UnknownIdentifier(start, name);
        return Expr::variable(name);
    }

    std::string_view src_;
    const Chart& chart_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view src, const Chart& chart) { return Parser(src, chart).parse(); }

}  // namespace degenlag
