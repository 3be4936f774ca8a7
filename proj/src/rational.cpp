#include "degenlag/rational.hpp"

#include <cctype>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace degenlag {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide value) {
    if (value > std::numeric_limits<std::int64_t>::max() || value < std::numeric_limits<std::int64_t>::min()) {
        throw std::overflow_error("rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(value);
}

Wide wide_gcd(Wide a, Wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational make(Wide num, Wide den) {
    if (den == 0) throw std::domain_error("rational division by zero");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    Wide g = wide_gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    if (den < 0) {
        // -INT64_MIN is not representable; go through the wide path.
        Wide n = -static_cast<Wide>(num);
        Wide d = -static_cast<Wide>(den);
        num_ = narrow(n);
        den_ = narrow(d);
    } else {
        num_ = num;
        den_ = den;
    }
    std::int64_t g = std::gcd(num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
}

bool Rational::from_decimal(std::string_view text, Rational& out) {
    Wide mantissa = 0;
    int scale = 0;
    std::size_t i = 0;
    bool any_digit = false;
    auto push_digit = [&](char c) {
        mantissa = mantissa * 10 + (c - '0');
        return mantissa <= std::numeric_limits<std::int64_t>::max();
    };
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        if (!push_digit(text[i])) return false;
        any_digit = true;
        ++i;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            if (!push_digit(text[i])) return false;
            any_digit = true;
            --scale;
            ++i;
        }
    }
    if (!any_digit) return false;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        int sign = 1;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        }
        int exponent = 0;
        bool any_exp = false;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            exponent = exponent * 10 + (text[i] - '0');
            if (exponent > 40) return false;
            any_exp = true;
            ++i;
        }
        if (!any_exp) return false;
        scale += sign * exponent;
    }
    if (i != text.size()) return false;
    Wide num = mantissa;
    Wide den = 1;
    const Wide limit = std::numeric_limits<std::int64_t>::max();
    for (; scale > 0; --scale) {
        num *= 10;
        if (num > limit) return false;
    }
    for (; scale < 0; ++scale) {
        den *= 10;
        if (den > limit) return false;
    }
    try {
        out = make(num, den);
    } catch (const std::overflow_error&) {
        return false;
    }
    return true;
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return make(-static_cast<Wide>(num_), den_); }

Rational operator+(const Rational& a, const Rational& b) {
    return make(static_cast<Wide>(a.num_) * b.den_ + static_cast<Wide>(b.num_) * a.den_,
                static_cast<Wide>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return make(static_cast<Wide>(a.num_) * b.den_ - static_cast<Wide>(b.num_) * a.den_,
                static_cast<Wide>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return make(static_cast<Wide>(a.num_) * b.num_, static_cast<Wide>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return make(static_cast<Wide>(a.num_) * b.den_, static_cast<Wide>(a.den_) * b.num_);
}

Rational Rational::pow(int exponent) const {
    if (exponent < 0) {
        if (num_ == 0) throw std::domain_error("zero raised to a negative power");
        return (Rational(1) / *this).pow(-exponent);
    }
    Rational result(1);
    Rational base = *this;
    while (exponent > 0) {
        if (exponent & 1) result = result * base;
        exponent >>= 1;
        if (exponent > 0) base = base * base;
    }
    return result;
}

bool operator<(const Rational& a, const Rational& b) {
    return static_cast<Wide>(a.num_) * b.den_ < static_cast<Wide>(b.num_) * a.den_;
}

}  // namespace degenlag
