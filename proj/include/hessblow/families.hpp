#pragma once

#include "hessblow/expected.hpp"
#include "hessblow/poly2.hpp"
#include "hessblow/rational.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace hessblow {

// ---------------------------------------------------------------------------
// Family catalog
// ---------------------------------------------------------------------------

/// u = a0/(1+12 a0 t) x²y² − (2/3) ln(1+12 a0 t) on [0,1]².
struct SquareFamily {
    Rational a0;
};

/// u = a0/(1−48 a0 t) r⁴ + (4/3) ln(1−48 a0 t) on the unit disc.
struct DiscFamily {
    Rational a0;
};

/// Seven-parameter non-radial quartic family on the plane.
struct QuarticPlaneFamily {
    Rational a0, a1, a2, a3, a4, a5, a6;
};

/// u = a0/(1−48 a0 a1 t) r⁴/(48 a1) + ln(1−48 a0 a1 t)/(36 a1²) + a2 on the plane.
struct RadialPlaneFamily {
    Rational a0, a1, a2;
};

/// u = a1x² + a2y² + 4a1a2 t + a0 exp(a3 x + (2a2a3² − a3⁴) t) + a4x + a5y + a6.
struct ExpPlaneFamily {
    Rational a0, a1, a2, a3, a4, a5, a6;
};

using SolutionFamily = std::variant<SquareFamily, DiscFamily, QuarticPlaneFamily, RadialPlaneFamily, ExpPlaneFamily>;

enum class FamilyKind { Square, Disc, QuarticPlane, RadialPlane, ExpPlane };

inline constexpr std::array<FamilyKind, 5> kAllFamilyKinds = {
    FamilyKind::Square, FamilyKind::Disc, FamilyKind::QuarticPlane, FamilyKind::RadialPlane, FamilyKind::ExpPlane};

inline FamilyKind kind_of(const SolutionFamily& f) { return static_cast<FamilyKind>(f.index()); }

inline const char* family_name(FamilyKind k) {
    switch (k) {
        case FamilyKind::Square: return "square";
        case FamilyKind::Disc: return "disc";
        case FamilyKind::QuarticPlane: return "quartic_plane";
        case FamilyKind::RadialPlane: return "radial_plane";
        case FamilyKind::ExpPlane: return "exp_plane";
    }
    return "?";
}
inline const char* family_name(const SolutionFamily& f) { return family_name(kind_of(f)); }

inline std::optional<FamilyKind> family_kind_from_name(std::string_view name) {
    for (auto k : kAllFamilyKinds)
        if (name == family_name(k)) return k;
    return std::nullopt;
}

/// Named parameters in a0, a1, ... order.
inline std::vector<std::pair<std::string, Rational>> parameters(const SolutionFamily& f) {
    return std::visit(
        [](const auto& v) -> std::vector<std::pair<std::string, Rational>> {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, SquareFamily> || std::is_same_v<T, DiscFamily>) {
                return {{"a0", v.a0}};
            } else if constexpr (std::is_same_v<T, RadialPlaneFamily>) {
                return {{"a0", v.a0}, {"a1", v.a1}, {"a2", v.a2}};
            } else {
                return {{"a0", v.a0}, {"a1", v.a1}, {"a2", v.a2}, {"a3", v.a3},
                        {"a4", v.a4}, {"a5", v.a5}, {"a6", v.a6}};
            }
        },
        f);
}

/// Builds a family from parameters in a0, a1, ... order; missing entries are zero.
inline SolutionFamily make_family(FamilyKind kind, const std::vector<Rational>& a) {
    auto p = [&](std::size_t i) { return i < a.size() ? a[i] : Rational(0); };
    switch (kind) {
        case FamilyKind::Square: return SquareFamily{p(0)};
        case FamilyKind::Disc: return DiscFamily{p(0)};
        case FamilyKind::QuarticPlane: return QuarticPlaneFamily{p(0), p(1), p(2), p(3), p(4), p(5), p(6)};
        case FamilyKind::RadialPlane: return RadialPlaneFamily{p(0), p(1), p(2)};
        case FamilyKind::ExpPlane: return ExpPlaneFamily{p(0), p(1), p(2), p(3), p(4), p(5), p(6)};
    }
    return SquareFamily{};
}

// ---------------------------------------------------------------------------
// Admissibility
// ---------------------------------------------------------------------------

/// nullopt when all family constraints hold; otherwise a ParameterError naming the constraint.
inline std::optional<Error> validate(const SolutionFamily& family) {
    if (auto* q = std::get_if<QuarticPlaneFamily>(&family)) {
        if (q->a2.is_zero()) return Error{ErrorKind::Parameter, "a2≠0"};
        if (q->a3.is_zero()) return Error{ErrorKind::Parameter, "a3≠0"};
        if (q->a1 * q->a3 == Rational(1, 24)) return Error{ErrorKind::Parameter, "a1a3≠1/24"};
    }
    if (auto* r = std::get_if<RadialPlaneFamily>(&family)) {
        if (r->a1.is_zero()) return Error{ErrorKind::Parameter, "a1≠0"};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// The quartic form and the algebraic condition
// ---------------------------------------------------------------------------

struct QuarticCoefficients {
    Rational x4, x3y, x2y2, xy3, y4;
};

inline QuarticCoefficients quartic_coefficients(const QuarticPlaneFamily& f) {
    const auto &a1 = f.a1, &a2 = f.a2, &a3 = f.a3;
    QuarticCoefficients c;
    c.x4 = (Rational(3456) * a1.pow(3) * a3.pow(3) + Rational(432) * a1.pow(2) * a3.pow(2) - Rational(1)) /
           (Rational(46656) * a2.pow(2) * a3.pow(3));
    c.x3y = (Rational(288) * a1.pow(3) * a3.pow(2) + Rational(12) * a1 * a3 - Rational(1)) /
            (Rational(648) * a2 * a3.pow(2));
    c.x2y2 = a1;
    c.xy3 = a2;
    c.y4 = Rational(9) * a2.pow(4) * a3 / (Rational(24) * a1 * a3 - Rational(1));
    return c;
}

/// The homogeneous quartic Q(x, y) whose sign partitions the plane.
inline RationalPoly2 quartic_poly(const QuarticPlaneFamily& f) {
    auto c = quartic_coefficients(f);
    RationalPoly2 q;
    q.add_term({4, 0}, c.x4);
    q.add_term({3, 1}, c.x3y);
    q.add_term({2, 2}, c.x2y2);
    q.add_term({1, 3}, c.xy3);
    q.add_term({0, 4}, c.y4);
    return q;
}

inline Rational quartic_Q(const QuarticPlaneFamily& f, const Rational& x, const Rational& y) {
    return eval(quartic_poly(f), x, y);
}

/// Left-hand side of the algebraic condition; the condition holds iff the value is nonzero.
inline Rational algebraic_condition(const QuarticPlaneFamily& f) {
    const auto &a1 = f.a1, &a2 = f.a2, &a3 = f.a3;
    return Rational(4) * a1 +
           (Rational(3456) * a1.pow(3) * a3.pow(3) + Rational(432) * a1.pow(2) * a3.pow(2) - Rational(1)) /
               (Rational(1944) * a2.pow(2) * a3.pow(3)) +
           Rational(216) * a2.pow(2) * a3 / (Rational(24) * a1 * a3 - Rational(1));
}

// ---------------------------------------------------------------------------
// Separable structure u = c/(1+kt)·P(x,y) + D·ln(1+kt) + A(x,y)
// ---------------------------------------------------------------------------

/// Exact data of the separable ansatz shared by the four polynomial families.
struct SeparableForm {
    RationalPoly2 P;       // spatial shape
    Rational c;            // f(t) = c / (1 + k t)
    Rational k;
    Rational D;            // g(t) = D ln(1 + k t)
    RationalPoly2 affine;  // time-independent part of degree ≤ 1
};

inline RationalPoly2 r4_poly() {
    auto r2 = RationalPoly2::monomial(2, 0) + RationalPoly2::monomial(0, 2);
    return r2 * r2;
}

/// nullopt for the exponential family, which is not of separable polynomial type.
inline std::optional<SeparableForm> separable_form(const SolutionFamily& family) {
    using P2 = RationalPoly2;
    if (auto* s = std::get_if<SquareFamily>(&family))
        return SeparableForm{P2::monomial(2, 2), s->a0, Rational(12) * s->a0, Rational(-2, 3), P2{}};
    if (auto* d = std::get_if<DiscFamily>(&family))
        return SeparableForm{r4_poly(), d->a0, Rational(-48) * d->a0, Rational(4, 3), P2{}};
    if (auto* q = std::get_if<QuarticPlaneFamily>(&family)) {
        Rational K = algebraic_condition(*q);
        P2 affine = P2::monomial(1, 0, q->a4) + P2::monomial(0, 1, q->a5) + P2(q->a6);
        return SeparableForm{quartic_poly(*q), q->a0, Rational(12) * q->a0 * q->a3, -K / (Rational(12) * q->a3), affine};
    }
    if (auto* r = std::get_if<RadialPlaneFamily>(&family)) {
        return SeparableForm{r4_poly() * (Rational(1) / (Rational(48) * r->a1)), r->a0,
                             Rational(-48) * r->a0 * r->a1, Rational(1) / (Rational(36) * r->a1.pow(2)), P2(r->a2)};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Numeric evaluation
// ---------------------------------------------------------------------------

/// Double-precision closed form compiled once from a family; used on hot paths (ghost filling).
class FamilyEvaluator {
public:
    explicit FamilyEvaluator(const SolutionFamily& family) {
        if (auto form = separable_form(family)) {
            separable_ = true;
            for (const auto& [m, c] : form->P.terms()) shape_.push_back({m.i, m.j, c.to_double()});
            c_ = form->c.to_double();
            k_ = form->k.to_double();
            d_ = form->D.to_double();
            ax_ = form->affine.coefficient(1, 0).to_double();
            ay_ = form->affine.coefficient(0, 1).to_double();
            a_ = form->affine.constant_term().to_double();
            radial_ = std::holds_alternative<DiscFamily>(family) || std::holds_alternative<RadialPlaneFamily>(family);
            if (radial_) r4_coef_ = form->P.coefficient(4, 0).to_double();
        } else {
            const auto params = parameters(family);
            for (std::size_t i = 0; i < e_.size(); ++i) e_[i] = params[i].second.to_double();
        }
    }

    /// False when the logarithm argument 1 + k t is not positive.
    bool defined_at(double t) const { return !separable_ || 1.0 + k_ * t > 0.0; }

    /// Value of the closed form; the caller is responsible for defined_at(t).
    double operator()(double x, double y, double t) const {
        if (separable_) {
            const double arg = 1.0 + k_ * t;
            double shape;
            if (radial_) {
                const double r2 = x * x + y * y;
                shape = r4_coef_ * r2 * r2;
            } else {
                shape = 0.0;
                for (const auto& term : shape_) shape += term.c * ipow(x, term.i) * ipow(y, term.j);
            }
            return c_ / arg * shape + d_ * std::log(arg) + ax_ * x + ay_ * y + a_;
        }
        const double a0 = e_[0], a1 = e_[1], a2 = e_[2], a3 = e_[3];
        return a1 * x * x + a2 * y * y + 4.0 * a1 * a2 * t +
               a0 * std::exp(a3 * x + (2.0 * a2 * a3 * a3 - a3 * a3 * a3 * a3) * t) + e_[4] * x + e_[5] * y + e_[6];
    }

    /// Spatially uniform time factor f(t) multiplying the shape polynomial (0 for the exponential family).
    double time_factor(double t) const { return separable_ ? c_ / (1.0 + k_ * t) : 0.0; }

private:
    struct Term {
        unsigned i, j;
        double c;
    };
    static double ipow(double b, unsigned e) {
        double r = 1.0;
        for (unsigned k = 0; k < e; ++k) r *= b;
        return r;
    }

    bool separable_ = false;
    bool radial_ = false;
    std::vector<Term> shape_;
    double r4_coef_ = 0, c_ = 0, k_ = 0, d_ = 0, ax_ = 0, ay_ = 0, a_ = 0;
    std::array<double, 7> e_{};
};

/// Closed-form value; Disc and RadialPlane interpret (x, y) through r = √(x²+y²).
inline Expected<double> evaluate(const SolutionFamily& family, double x, double y, double t) {
    FamilyEvaluator ev(family);
    if (!ev.defined_at(t))
        return fail(ErrorKind::Domain, std::string("t=") + std::to_string(t) + " outside the existence interval of " +
                                           family_name(family));
    return ev(x, y, t);
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

enum class BlowUpKind { Global, FiniteTime, InfiniteTime };

inline const char* to_string(BlowUpKind k) {
    switch (k) {
        case BlowUpKind::Global: return "Global";
        case BlowUpKind::FiniteTime: return "FiniteTime";
        case BlowUpKind::InfiniteTime: return "InfiniteTime";
    }
    return "?";
}

struct BlowUpClass {
    BlowUpKind kind = BlowUpKind::Global;
    std::optional<Rational> t_star;  // present iff FiniteTime
    std::string notes;
};

namespace detail {
inline BlowUpClass global(std::string n) { return {BlowUpKind::Global, std::nullopt, std::move(n)}; }
inline BlowUpClass infinite(std::string n) { return {BlowUpKind::InfiniteTime, std::nullopt, std::move(n)}; }
inline BlowUpClass finite(Rational t, std::string n) { return {BlowUpKind::FiniteTime, std::move(t), std::move(n)}; }
}  // namespace detail

inline Expected<BlowUpClass> classify(const SolutionFamily& family) {
    if (auto err = validate(family)) return unexpected(*err);
    using namespace detail;
    if (auto* s = std::get_if<SquareFamily>(&family)) {
        int sg = s->a0.sign();
        if (sg == 0) return global("a0=0: u≡0");
        if (sg > 0) return infinite("a0>0: exists for all times, u→−∞ as t→∞");
        return finite(Rational(-1) / (Rational(12) * s->a0), "a0<0: T*=−1/(12a0)");
    }
    if (auto* d = std::get_if<DiscFamily>(&family)) {
        int sg = d->a0.sign();
        if (sg == 0) return global("a0=0: u≡0");
        if (sg < 0) return infinite("a0<0: exists for all times, u→+∞ as t→∞");
        return finite(Rational(1) / (Rational(48) * d->a0), "a0>0: T*=1/(48a0)");
    }
    if (auto* q = std::get_if<QuarticPlaneFamily>(&family)) {
        int sg = (q->a0 * q->a3).sign();
        if (q->a0.is_zero()) return global("a0=0: reduces to a4x+a5y+a6");
        if (sg < 0) return finite(Rational(-1) / (Rational(12) * q->a0 * q->a3), "a0a3<0: T*=−1/(12a0a3)");
        if (!algebraic_condition(*q).is_zero()) return infinite("a0a3>0 and the algebraic condition holds");
        return fail(ErrorKind::UnresolvedCase, "a0a3>0 with the algebraic condition violated is not classified");
    }
    if (auto* r = std::get_if<RadialPlaneFamily>(&family)) {
        if (r->a0.is_zero()) return global("a0=0: u≡a2");
        int sg = (r->a0 * r->a1).sign();
        if (sg < 0) return infinite("a0a1<0: u→+∞ as t→∞");
        return finite(Rational(1) / (Rational(48) * r->a0 * r->a1), "a0a1>0: T*=1/(48a0a1)");
    }
    const auto& e = std::get<ExpPlaneFamily>(family);
    bool quadratic_growth = !(e.a1 * e.a2).is_zero();
    bool exp_growth = Rational(2) * e.a2 > e.a3.pow(2) && !e.a3.is_zero() && !e.a0.is_zero();
    if (quadratic_growth || exp_growth)
        return infinite(quadratic_growth ? "a1a2≠0" : "2a2>a3², a3≠0, a0≠0");
    return global("a1a2=0 and (2a2≤a3² or a3=0 or a0=0)");
}

// ---------------------------------------------------------------------------
// Pointwise fate at the blow-up time
// ---------------------------------------------------------------------------

enum class PointFate { PlusInfinity, MinusInfinity, Finite };

inline const char* to_string(PointFate f) {
    switch (f) {
        case PointFate::PlusInfinity: return "+inf";
        case PointFate::MinusInfinity: return "-inf";
        case PointFate::Finite: return "finite";
    }
    return "?";
}

/// Exact binary value of a double as a rational.
inline Rational from_double(double v) {
    if (v == 0.0) return Rational(0);
    int e = 0;
    double m = std::frexp(v, &e);  // v = m·2^e, |m| in [0.5, 1)
    auto mant = static_cast<long long>(std::ldexp(m, 53));
    e -= 53;
    BigInt two_pow = boost::multiprecision::pow(BigInt(2), static_cast<unsigned>(e < 0 ? -e : e));
    return e < 0 ? Rational(BigInt(mant), two_pow) : Rational(BigInt(BigInt(mant) * two_pow));
}

/// Fate of the sets used for a1 = 0 given the exact sign of Q and of a0.
/// The bracketed quartic of those sets is −Q, so {−Q<0} = {Q>0}.
inline PointFate reduced_quartic_fate(int q_sign, int a0_sign) {
    if (q_sign == 0) return PointFate::PlusInfinity;
    return q_sign * a0_sign > 0 ? PointFate::PlusInfinity : PointFate::MinusInfinity;
}

inline Expected<PointFate> limit_fate(const SolutionFamily& family, double x, double y) {
    auto cls = classify(family);
    if (!cls) return unexpected(cls.error());
    if (cls->kind == BlowUpKind::Global)
        return fail(ErrorKind::UnsupportedCase, std::string(family_name(family)) + " does not blow up");
    const bool finite = cls->kind == BlowUpKind::FiniteTime;
    constexpr auto plus = PointFate::PlusInfinity;
    constexpr auto minus = PointFate::MinusInfinity;

    if (std::holds_alternative<SquareFamily>(family)) {
        if (!finite) return minus;
        return (x == 0.0 || y == 0.0) ? plus : minus;
    }
    if (std::holds_alternative<DiscFamily>(family) || std::holds_alternative<RadialPlaneFamily>(family)) {
        if (!finite) return plus;
        return (x == 0.0 && y == 0.0) ? minus : plus;
    }
    if (auto* q = std::get_if<QuarticPlaneFamily>(&family)) {
        if (!finite) return plus;
        int qs = quartic_Q(*q, from_double(x), from_double(y)).sign();
        if (q->a1.is_zero()) return reduced_quartic_fate(qs, q->a0.sign());
        if (qs != 0) return qs * q->a0.sign() > 0 ? plus : minus;
        // On {Q = 0} only −K/(12a3)·ln(1+12a0a3t) remains; it diverges iff the algebraic condition holds.
        const int ks = (algebraic_condition(*q) * q->a3).sign();
        if (ks == 0) return PointFate::Finite;
        return ks > 0 ? plus : minus;
    }
    const auto& e = std::get<ExpPlaneFamily>(family);
    if (!e.a3.is_zero() && !e.a0.is_zero() && Rational(2) * e.a2 > e.a3.pow(2)) return e.a0.sign() > 0 ? plus : minus;
    return (e.a1 * e.a2).sign() > 0 ? plus : minus;
}

// ---------------------------------------------------------------------------
// Exact verification
// ---------------------------------------------------------------------------

struct IdentityCheck {
    std::string name;
    bool holds = false;
    RationalPoly2 residual;  // zero iff holds
};

struct StructureDecomposition {
    RationalPoly2 P;
    std::optional<Rational> alpha, beta, gamma;  // absent for the exponential family
    bool time_ode_check = false;
    std::vector<IdentityCheck> identities;
};

struct VerificationFailure {
    std::string which;
    RationalPoly2 residual;
    std::vector<IdentityCheck> identities;
};

namespace detail {

inline IdentityCheck identity(std::string name, RationalPoly2 residual) {
    bool ok = residual.is_zero();
    return {std::move(name), ok, std::move(residual)};
}

inline Expected<StructureDecomposition, VerificationFailure> finish(StructureDecomposition d) {
    for (const auto& id : d.identities)
        if (!id.holds) return unexpected(VerificationFailure{id.name, id.residual, d.identities});
    return d;
}

/// α and β read off from the largest monomial of P and the constant terms.
inline std::pair<Rational, Rational> fit_alpha_beta(const RationalPoly2& P, const RationalPoly2& det) {
    if (P.is_zero()) return {Rational(0), det.constant_term()};
    auto [lead, pc] = *P.terms().rbegin();
    Rational alpha = det.coefficient(lead.i, lead.j) / pc;
    Rational beta = det.constant_term() - alpha * P.constant_term();
    return {alpha, beta};
}

}  // namespace detail

/// Exact check that the family solves u_t = det(D²u) − Δ²u.
///
/// Separable families: det(D²P) = αP + β, Δ²P = γ, then f' = αf² and g' = βf² − γf for
/// f = c/(1+kt), g = D ln(1+kt), compared coefficient-wise in the basis (1+kt)^-2, (1+kt)^-1.
/// Exponential family: the constant and exp(·)-proportional parts are matched separately.
inline Expected<StructureDecomposition, VerificationFailure> verify_pde(const SolutionFamily& family) {
    if (auto err = validate(family))
        return unexpected(VerificationFailure{"admissibility: " + err->message, {}, {}});
    using detail::identity;

    if (auto form = separable_form(family)) {
        StructureDecomposition d;
        d.P = form->P;
        const RationalPoly2 det = hessian_det(form->P);
        const RationalPoly2 bih = bilaplacian(form->P);
        auto [alpha, beta] = detail::fit_alpha_beta(form->P, det);
        Rational gamma = bih.constant_term();
        d.alpha = alpha;
        d.beta = beta;
        d.gamma = gamma;
        d.identities.push_back(identity("hessian_det(P) = alpha*P + beta", det - form->P * alpha - RationalPoly2(beta)));
        d.identities.push_back(identity("bilaplacian(P) = gamma", bih - RationalPoly2(gamma)));
        d.identities.push_back(identity("affine part invisible to both operators",
                                        hessian_det(form->P + form->affine) - det + bilaplacian(form->affine)));
        const auto &c = form->c, &k = form->k, &D = form->D;
        // f' − αf²: coefficient of (1+kt)^-2 is −ck − αc².
        d.identities.push_back(identity("f' = alpha*f^2", RationalPoly2(-c * k - alpha * c * c)));
        // g' − (βf² − γf): coefficients of (1+kt)^-2 and (1+kt)^-1.
        d.identities.push_back(identity("g' = beta*f^2 - gamma*f [(1+kt)^-2]", RationalPoly2(beta * c * c)));
        d.identities.push_back(identity("g' = beta*f^2 - gamma*f [(1+kt)^-1]", RationalPoly2(D * k + gamma * c)));
        d.time_ode_check = d.identities[3].holds && d.identities[4].holds && d.identities[5].holds;
        return detail::finish(std::move(d));
    }

    const auto& e = std::get<ExpPlaneFamily>(family);
    using P2 = RationalPoly2;
    StructureDecomposition d;
    d.P = P2::monomial(2, 0, e.a1) + P2::monomial(0, 2, e.a2) + P2::monomial(1, 0, e.a4) +
          P2::monomial(0, 1, e.a5) + P2(e.a6);
    // Exponential part E = a0·exp(a3 x + λt): E_x = a3 E, independent of y.
    const P2 pyy = derive(d.P, Axis::Y, 2);
    const Rational a3sq = e.a3.pow(2);
    const Rational lambda = Rational(2) * e.a2 * a3sq - a3sq.pow(2);
    // u_t constant part 4a1a2 against det(D²P) − Δ²P.
    d.identities.push_back(
        identity("constant part: 4*a1*a2 = det(D^2 P) - bilaplacian(P)",
                 hessian_det(d.P) - bilaplacian(d.P) - P2(Rational(4) * e.a1 * e.a2)));
    // Coefficient of E: a0·λ against a0 a3² P_yy − a0 a3⁴.
    d.identities.push_back(identity("exponential part: a0*(2*a2*a3^2 - a3^4) = a0*a3^2*P_yy - a0*a3^4",
                                    pyy * (e.a0 * a3sq) - P2(e.a0 * a3sq.pow(2)) - P2(e.a0 * lambda)));
    d.time_ode_check = d.identities[0].holds && d.identities[1].holds;
    return detail::finish(std::move(d));
}

/// The eight square boundary conditions, checked on the shape polynomial. Every condition is
/// linear, homogeneous and involves only derivatives, so the time factor and the spatially
/// constant log term drop out.
inline std::vector<IdentityCheck> boundary_identities(const SquareFamily& family) {
    (void)family;
    using detail::identity;
    const RationalPoly2 P = RationalPoly2::monomial(2, 2);
    const Rational zero(0), one(1);
    auto dx = [&](unsigned n) { return derive(P, Axis::X, n); };
    auto dy = [&](unsigned n) { return derive(P, Axis::Y, n); };
    std::vector<IdentityCheck> out;
    out.push_back(identity("d3x u(0,y) = 0", substitute(dx(3), Axis::X, zero)));
    out.push_back(identity("d3x u(1,y) = 0", substitute(dx(3), Axis::X, one)));
    out.push_back(identity("d3y u(x,0) = 0", substitute(dy(3), Axis::Y, zero)));
    out.push_back(identity("d3y u(x,1) = 0", substitute(dy(3), Axis::Y, one)));
    out.push_back(identity("dx u(0,y) = 0", substitute(dx(1), Axis::X, zero)));
    out.push_back(identity("dy u(x,0) = 0", substitute(dy(1), Axis::Y, zero)));
    out.push_back(identity("dx u(1,y) = d2x u(1,y)", substitute(dx(1) - dx(2), Axis::X, one)));
    out.push_back(identity("dy u(x,1) = d2y u(x,1)", substitute(dy(1) - dy(2), Axis::Y, one)));
    return out;
}

/// The four disc conditions on the radial profile U(r) = r⁴, held as a polynomial in x.
inline std::vector<IdentityCheck> boundary_identities(const DiscFamily& family) {
    (void)family;
    using detail::identity;
    const RationalPoly2 U = substitute(r4_poly(), Axis::Y, Rational(0));
    auto dr = [&](unsigned n) { return derive(U, Axis::X, n); };
    auto at = [](const RationalPoly2& p, long long r) { return RationalPoly2(eval(p, Rational(r), Rational(0))); };
    std::vector<IdentityCheck> out;
    out.push_back(identity("3 dr u(1) = d2r u(1)", at(dr(1) * Rational(3) - dr(2), 1)));
    out.push_back(identity("2 d2r u(1) = d3r u(1)", at(dr(2) * Rational(2) - dr(3), 1)));
    out.push_back(identity("dr u(0) = 0", at(dr(1), 0)));
    out.push_back(identity("d3r u(0) = 0", at(dr(3), 0)));
    return out;
}

template <typename F>
    requires std::is_same_v<F, SquareFamily> || std::is_same_v<F, DiscFamily>
Expected<std::vector<IdentityCheck>, VerificationFailure> verify_boundary(const F& family) {
    auto ids = boundary_identities(family);
    for (const auto& id : ids)
        if (!id.holds) return unexpected(VerificationFailure{id.name, id.residual, ids});
    return ids;
}

// ---------------------------------------------------------------------------
// Random admissible parameters for verification sweeps
// ---------------------------------------------------------------------------

inline Rational random_rational(std::mt19937_64& rng, int max_num = 9, int max_den = 9) {
    std::uniform_int_distribution<int> num(-max_num, max_num);
    std::uniform_int_distribution<int> den(1, max_den);
    return Rational(num(rng), den(rng));
}

inline SolutionFamily random_family(FamilyKind kind, std::mt19937_64& rng) {
    const std::size_t n = kind == FamilyKind::Square || kind == FamilyKind::Disc ? 1
                          : kind == FamilyKind::RadialPlane                       ? 3
                                                                                  : 7;
    for (;;) {
        std::vector<Rational> a;
        for (std::size_t i = 0; i < n; ++i) a.push_back(random_rational(rng));
        auto fam = make_family(kind, a);
        if (!validate(fam)) return fam;
    }
}

}  // namespace hessblow
