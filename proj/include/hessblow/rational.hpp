#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <compare>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace hessblow {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number in lowest terms with a positive denominator.
///
/// Thin value type over boost::multiprecision::cpp_rational, which already
/// normalizes after every operation.
class Rational {
public:
    using Impl = boost::multiprecision::cpp_rational;

    Rational() = default;
    Rational(long long n) : v_(n) {}
    Rational(const BigInt& n) : v_(n) {}
    // The backend rejects negative denominators, so the sign moves to the numerator first.
    Rational(const BigInt& n, const BigInt& d) : v_(d < 0 ? Impl(BigInt(-n), BigInt(-d)) : Impl(n, d)) {}
    Rational(long long n, long long d) : Rational(BigInt(n), BigInt(d)) {}
    explicit Rational(Impl v) : v_(std::move(v)) {}

    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    int sign() const { return v_.sign(); }
    bool is_zero() const { return v_.is_zero(); }
    double to_double() const { return v_.convert_to<double>(); }
    const Impl& impl() const { return v_; }

    /// "num/den" with the denominator always present.
    std::string str() const { return numerator().str() + "/" + denominator().str(); }

    Rational operator-() const { return Rational(Impl(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) { v_ /= o.v_; return *this; }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        if (a.v_ < b.v_) return std::strong_ordering::less;
        if (a.v_ > b.v_) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

    Rational pow(unsigned e) const {
        Rational out(1);
        for (unsigned k = 0; k < e; ++k) out *= *this;
        return out;
    }

    /// Parses "n", "n/d", or a decimal literal such as "-1.25e-3" exactly.
    static std::optional<Rational> parse(std::string_view s);

private:
    Impl v_{0};
};

namespace detail {

inline std::optional<BigInt> parse_integer(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) return std::nullopt;
    BigInt v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
        v = v * 10 + (s[i] - '0');
    }
    return neg ? BigInt(-v) : v;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace detail

inline std::optional<Rational> Rational::parse(std::string_view s) {
    s = detail::trim(s);
    if (s.empty()) return std::nullopt;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto n = detail::parse_integer(detail::trim(s.substr(0, slash)));
        auto d = detail::parse_integer(detail::trim(s.substr(slash + 1)));
        if (!n || !d || d->is_zero()) return std::nullopt;
        return Rational(*n, *d);
    }
    // decimal: [sign] digits [. digits] [e|E [sign] digits]
    std::string_view mant = s;
    long long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        auto ev = detail::parse_integer(s.substr(e + 1));
        if (!ev || abs(*ev) > 4000) return std::nullopt;
        exp10 = ev->convert_to<long long>();
        mant = s.substr(0, e);
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '+' || mant[0] == '-')) {
        neg = mant[0] == '-';
        mant.remove_prefix(1);
    }
    std::string digits;
    bool seen_dot = false;
    bool seen_digit = false;
    for (char c : mant) {
        if (c == '.') {
            if (seen_dot) return std::nullopt;
            seen_dot = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_dot) --exp10;
        } else {
            return std::nullopt;
        }
    }
    if (!seen_digit) return std::nullopt;
    auto n = detail::parse_integer(digits);
    if (!n) return std::nullopt;
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
    Rational r = exp10 < 0 ? Rational(*n, scale) : Rational(BigInt(*n * scale));
    return neg ? -r : r;
}

}  // namespace hessblow
