#pragma once

#include "hessblow/expected.hpp"
#include "hessblow/rational.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

namespace hessblow {

enum class Axis { X, Y };

/// Exponent pair of x^i y^j.
struct Monomial {
    unsigned i = 0;
    unsigned j = 0;
    unsigned degree() const { return i + j; }
    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded lexicographic order: total degree first, then higher x power first.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        return a.i > b.i;
    }
};

/// Sparse bivariate polynomial over the rationals. Zero coefficients are never stored.
class RationalPoly2 {
public:
    using Terms = std::map<Monomial, Rational, GrlexLess>;

    RationalPoly2() = default;
    RationalPoly2(const Rational& c) { add_term({0, 0}, c); }
    RationalPoly2(long long c) : RationalPoly2(Rational(c)) {}

    static RationalPoly2 monomial(unsigned i, unsigned j, const Rational& c = Rational(1)) {
        RationalPoly2 p;
        p.add_term({i, j}, c);
        return p;
    }
    static RationalPoly2 x() { return monomial(1, 0); }
    static RationalPoly2 y() { return monomial(0, 1); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Maximum total degree; 0 for the zero polynomial.
    unsigned degree() const { return terms_.empty() ? 0 : terms_.rbegin()->first.degree(); }

    Rational coefficient(unsigned i, unsigned j) const {
        auto it = terms_.find({i, j});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    Rational constant_term() const { return coefficient(0, 0); }

    void add_term(Monomial m, const Rational& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    RationalPoly2& operator+=(const RationalPoly2& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    RationalPoly2& operator-=(const RationalPoly2& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    RationalPoly2& operator*=(const Rational& s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto& [m, c] : terms_) c *= s;
        return *this;
    }

    friend RationalPoly2 operator+(RationalPoly2 a, const RationalPoly2& b) { return a += b; }
    friend RationalPoly2 operator-(RationalPoly2 a, const RationalPoly2& b) { return a -= b; }
    friend RationalPoly2 operator-(RationalPoly2 a) { return a *= Rational(-1); }
    friend RationalPoly2 operator*(RationalPoly2 a, const Rational& s) { return a *= s; }
    friend RationalPoly2 operator*(const Rational& s, RationalPoly2 a) { return a *= s; }
    friend RationalPoly2 operator*(const RationalPoly2& a, const RationalPoly2& b) {
        RationalPoly2 out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) out.add_term({ma.i + mb.i, ma.j + mb.j}, ca * cb);
        return out;
    }
    friend bool operator==(const RationalPoly2& a, const RationalPoly2& b) { return a.terms_ == b.terms_; }

    RationalPoly2 pow(unsigned e) const {
        RationalPoly2 out(1);
        for (unsigned k = 0; k < e; ++k) out = out * *this;
        return out;
    }

private:
    Terms terms_;
};

enum class CombineOp { Add, Sub, Mul };

/// scale · (p op q), exact.
inline RationalPoly2 combine(const RationalPoly2& p, const RationalPoly2& q, CombineOp op,
                             const Rational& scale = Rational(1)) {
    RationalPoly2 r;
    switch (op) {
        case CombineOp::Add: r = p + q; break;
        case CombineOp::Sub: r = p - q; break;
        case CombineOp::Mul: r = p * q; break;
    }
    return r * scale;
}

/// Formal partial derivative of the given order along one axis.
inline RationalPoly2 derive(const RationalPoly2& p, Axis axis, unsigned order = 1) {
    RationalPoly2 out;
    for (const auto& [m, c] : p.terms()) {
        unsigned e = axis == Axis::X ? m.i : m.j;
        if (e < order) continue;
        Rational f = c;
        for (unsigned k = 0; k < order; ++k) f *= Rational(static_cast<long long>(e - k));
        Monomial dm = axis == Axis::X ? Monomial{m.i - order, m.j} : Monomial{m.i, m.j - order};
        out.add_term(dm, f);
    }
    return out;
}

inline RationalPoly2 laplacian(const RationalPoly2& p) { return derive(p, Axis::X, 2) + derive(p, Axis::Y, 2); }

/// det(D²p) = p_xx p_yy − p_xy².
inline RationalPoly2 hessian_det(const RationalPoly2& p) {
    auto pxx = derive(p, Axis::X, 2);
    auto pyy = derive(p, Axis::Y, 2);
    auto pxy = derive(derive(p, Axis::X), Axis::Y);
    return pxx * pyy - pxy * pxy;
}

/// Δ²p = p_xxxx + 2 p_xxyy + p_yyyy.
inline RationalPoly2 bilaplacian(const RationalPoly2& p) {
    return derive(p, Axis::X, 4) + derive(derive(p, Axis::X, 2), Axis::Y, 2) * Rational(2) + derive(p, Axis::Y, 4);
}

inline Rational eval(const RationalPoly2& p, const Rational& x, const Rational& y) {
    Rational acc(0);
    for (const auto& [m, c] : p.terms()) acc += c * x.pow(m.i) * y.pow(m.j);
    return acc;
}

inline double eval(const RationalPoly2& p, double x, double y) {
    double acc = 0.0;
    for (const auto& [m, c] : p.terms()) {
        double t = c.to_double();
        for (unsigned k = 0; k < m.i; ++k) t *= x;
        for (unsigned k = 0; k < m.j; ++k) t *= y;
        acc += t;
    }
    return acc;
}

/// Restricts p to the line axis = value; the result depends only on the other variable.
inline RationalPoly2 substitute(const RationalPoly2& p, Axis axis, const Rational& value) {
    RationalPoly2 out;
    for (const auto& [m, c] : p.terms()) {
        if (axis == Axis::X)
            out.add_term({0, m.j}, c * value.pow(m.i));
        else
            out.add_term({m.i, 0}, c * value.pow(m.j));
    }
    return out;
}

/// One "i j num/den" line per term in grlex order; the zero polynomial is the empty string.
inline std::string to_text(const RationalPoly2& p) {
    std::string out;
    for (const auto& [m, c] : p.terms()) {
        out += std::to_string(m.i) + " " + std::to_string(m.j) + " " + c.str() + "\n";
    }
    return out;
}

inline Expected<RationalPoly2> from_text(std::string_view text) {
    RationalPoly2 p;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        std::istringstream ls(line);
        long long i = -1, j = -1;
        std::string coeff, extra;
        if (!(ls >> i >> j >> coeff) || (ls >> extra) || i < 0 || j < 0)
            return fail(ErrorKind::Parse, "malformed polynomial term on line " + std::to_string(lineno));
        auto c = Rational::parse(coeff);
        if (!c) return fail(ErrorKind::Parse, "bad coefficient '" + coeff + "' on line " + std::to_string(lineno));
        p.add_term({static_cast<unsigned>(i), static_cast<unsigned>(j)}, *c);
    }
    return p;
}

/// Human-readable form, e.g. "-12*x^2*y^2 + 3".
inline std::string to_pretty(const RationalPoly2& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        Rational a = c.sign() < 0 ? -c : c;
        out += first ? (c.sign() < 0 ? "-" : "") : (c.sign() < 0 ? " - " : " + ");
        first = false;
        bool unit = a == Rational(1) && m.degree() > 0;
        std::string cs = a.denominator() == 1 ? a.numerator().str() : "(" + a.str() + ")";
        std::string mono;
        if (m.i > 0) mono += m.i == 1 ? "x" : "x^" + std::to_string(m.i);
        if (m.j > 0) mono += std::string(mono.empty() ? "" : "*") + (m.j == 1 ? "y" : "y^" + std::to_string(m.j));
        out += unit ? mono : (mono.empty() ? cs : cs + "*" + mono);
    }
    return out;
}

}  // namespace hessblow
