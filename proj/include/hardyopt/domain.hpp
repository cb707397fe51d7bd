#pragma once

// Model domains and the catalog of closed-form radial p-harmonic profiles.
//
// A profile G plays the role of the minimal p-Green function on a punctured,
// annular or exterior radial domain. The catalog covers Lebesgue measure:
//   punctured space, p != n :  G = r^a,            a = (p-n)/(p-1)
//   punctured ball,  p <  n :  G = r^a - R^a
//   punctured ball,  p == n :  G = log(R/r)
//   punctured ball,  p >  n :  G = R^a - r^a
//   exterior,        p <  n :  G = r^a
//   annulus,         p != n :  G = (r^a - r1^a)/(r2^a - r1^a)
//   annulus,         p == n :  G = log(r/r1)/log(r2/r1)
// Each profile records its end limits and classification:
//   A7          : limits (inf, 0) with p <= n
//   A8Gamma0    : limits (0, inf) with p >  n
//   A8GammaPos  : limits (gamma, 0) with p > n, gamma > 0
//   TwoEnds     : finite distinct limits m < M

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "hardyopt/common.hpp"

namespace hardyopt {

enum class DomainKind { PuncturedSpace, PuncturedBall, Annulus, Exterior };

struct RadialDomain {
    DomainKind kind = DomainKind::PuncturedSpace;
    double r1 = 0.0;                                        // inner boundary (0 if punctured)
    double r2 = std::numeric_limits<double>::infinity();     // outer boundary (inf if unbounded)

    static RadialDomain punctured_space() { return {DomainKind::PuncturedSpace, 0.0, inf()}; }
    static RadialDomain punctured_ball(double R) {
        require(R > 0.0, "punctured ball requires R > 0");
        return {DomainKind::PuncturedBall, 0.0, R};
    }
    static RadialDomain annulus(double a, double b) {
        require(0.0 < a && a < b && std::isfinite(b), "annulus requires 0 < r1 < r2 < inf");
        return {DomainKind::Annulus, a, b};
    }
    static RadialDomain exterior(double R) {
        require(R > 0.0, "exterior requires R > 0");
        return {DomainKind::Exterior, R, inf()};
    }

    bool contains(double r) const { return r > r1 && r < r2; }
    // A radius well inside the open interval, for sampling.
    double midpoint() const {
        const double lo = (r1 > 0.0) ? r1 : ((std::isfinite(r2)) ? r2 * 1e-3 : 1e-3);
        const double hi = std::isfinite(r2) ? r2 : ((r1 > 0.0) ? r1 * 1e3 : 1e3);
        return std::sqrt(lo * hi);
    }
    // Geometric sample range strictly inside the domain.
    std::pair<double, double> sample_range() const {
        double lo = r1, hi = r2;
        if (lo == 0.0) lo = std::isfinite(hi) ? hi * 1e-6 : 1e-6;
        if (!std::isfinite(hi)) hi = (r1 > 0.0) ? r1 * 1e6 : 1e6;
        return {lo * 1.000001, hi * 0.999999};
    }
    std::string name() const {
        switch (kind) {
            case DomainKind::PuncturedSpace: return "punctured_space";
            case DomainKind::PuncturedBall: return "punctured_ball";
            case DomainKind::Annulus: return "annulus";
            case DomainKind::Exterior: return "exterior";
        }
        return "?";
    }

private:
    static double inf() { return std::numeric_limits<double>::infinity(); }
    static void require(bool ok, const char* msg) {
        if (!ok) throw PreconditionError(ErrorCode::InvalidProfile, msg);
    }
};

struct Classification {
    enum class Kind { A7, A8Gamma0, A8GammaPos, TwoEnds } kind = Kind::A7;
    double gamma = 0.0;  // A8GammaPos
    double m = 0.0;      // TwoEnds: smaller limit
    double M = 0.0;      // TwoEnds: larger limit

    static Classification a7() { return {Kind::A7, 0, 0, 0}; }
    static Classification a8_gamma0() { return {Kind::A8Gamma0, 0, 0, 0}; }
    static Classification a8_gamma(double g) { return {Kind::A8GammaPos, g, 0, 0}; }
    static Classification two_ends(double m, double M) { return {Kind::TwoEnds, 0, m, M}; }
    std::string name() const {
        switch (kind) {
            case Kind::A7: return "A7";
            case Kind::A8Gamma0: return "A8Gamma0";
            case Kind::A8GammaPos: return "A8GammaPos";
            case Kind::TwoEnds: return "TwoEnds";
        }
        return "?";
    }
};

struct EndBehavior {
    enum class Which { Inner, Outer } which;
    ExtReal limit;
};

// Positive radial p-harmonic profile with closed-form evaluators, a monotone
// inverse, end limits, and a classification tag.
class GreenProfile {
public:
    enum class Form { Power, PowerShift, Log, Custom };

    // G(r) = scale * r^a
    static GreenProfile power(double a, double scale, RadialDomain dom, Classification cls) {
        GreenProfile g;
        g.form_ = Form::Power;
        g.a_ = a;
        g.scale_ = scale;
        g.dom_ = dom;
        g.cls_ = cls;
        g.finalize_limits();
        return g;
    }
    // G(r) = scale * (r^a - c)
    static GreenProfile power_shift(double a, double c, double scale, RadialDomain dom,
                                    Classification cls) {
        GreenProfile g;
        g.form_ = Form::PowerShift;
        g.a_ = a;
        g.c_ = c;
        g.rc_ = std::pow(c, 1.0 / a);
        g.scale_ = scale;
        g.dom_ = dom;
        g.cls_ = cls;
        g.finalize_limits();
        return g;
    }
    // G(r) = scale * log(r / R)
    static GreenProfile log_profile(double R, double scale, RadialDomain dom,
                                    Classification cls) {
        GreenProfile g;
        g.form_ = Form::Log;
        g.R_ = R;
        g.scale_ = scale;
        g.dom_ = dom;
        g.cls_ = cls;
        g.finalize_limits();
        return g;
    }
    // User-supplied profile; p-harmonicity is validated by the caller
    // (see validated_custom in calculus.hpp).
    static GreenProfile custom(std::function<double(double)> value,
                               std::function<double(double)> derivative,
                               std::function<double(double)> second,
                               RadialDomain dom, Classification cls, ExtReal inner_limit,
                               ExtReal outer_limit) {
        GreenProfile g;
        g.form_ = Form::Custom;
        g.custom_value_ = std::move(value);
        g.custom_derivative_ = std::move(derivative);
        g.custom_second_ = std::move(second);
        g.dom_ = dom;
        g.cls_ = cls;
        g.inner_ = inner_limit;
        g.outer_ = outer_limit;
        return g;
    }

    double value(double r) const {
        switch (form_) {
            case Form::Power: return scale_ * std::pow(r, a_);
            case Form::PowerShift:
                // r^a - c = c expm1(a log(r / c^{1/a})): full relative accuracy
                // also where the difference vanishes.
                return scale_ * c_ * std::expm1(a_ * std::log(r / rc_));
            case Form::Log: return scale_ * std::log(r / R_);
            case Form::Custom: return custom_value_(r);
        }
        return 0.0;
    }

    // level - G(r), computed without cancellation: for the power forms
    //   level - s r^a = s (r_level^a - r^a) = s r^a expm1(a log(r_level / r)).
    double gap(double level, double r) const {
        switch (form_) {
            case Form::Power:
            case Form::PowerShift: {
                const double r_level = inverse(level);
                return scale_ * std::pow(r, a_) * std::expm1(a_ * std::log(r_level / r));
            }
            case Form::Log: return scale_ * std::log(inverse(level) / r);
            case Form::Custom: return level - custom_value_(r);
        }
        return 0.0;
    }
    double derivative(double r) const {
        switch (form_) {
            case Form::Power: return scale_ * a_ * std::pow(r, a_ - 1.0);
            case Form::PowerShift: return scale_ * a_ * std::pow(r, a_ - 1.0);
            case Form::Log: return scale_ / r;
            case Form::Custom: return custom_derivative_(r);
        }
        return 0.0;
    }
    double second_derivative(double r) const {
        switch (form_) {
            case Form::Power:
            case Form::PowerShift: return scale_ * a_ * (a_ - 1.0) * std::pow(r, a_ - 2.0);
            case Form::Log: return -scale_ / (r * r);
            case Form::Custom:
                if (!custom_second_)
                    throw PreconditionError(ErrorCode::MissingSecondDerivative,
                                            "custom profile has no second derivative");
                return custom_second_(r);
        }
        return 0.0;
    }

    // Radius with G(r) = t; profiles are strictly monotone on the open domain.
    double inverse(double t) const {
        switch (form_) {
            case Form::Power: return std::pow(t / scale_, 1.0 / a_);
            case Form::PowerShift:
                // (t/s + c)^{1/a} = c^{1/a} (1 + t/(s c))^{1/a}, stable as t -> 0.
                return rc_ * std::exp(std::log1p(t / (scale_ * c_)) / a_);
            case Form::Log: return R_ * std::exp(t / scale_);
            case Form::Custom: return bisect_inverse(t);
        }
        return 0.0;
    }

    bool increasing() const {
        const double r = dom_.midpoint();
        return derivative(r) > 0.0;
    }

    ExtReal limit_inner() const { return inner_; }
    ExtReal limit_outer() const { return outer_; }
    const RadialDomain& domain() const { return dom_; }
    const Classification& classification() const { return cls_; }
    Form form() const { return form_; }
    double power_exponent() const { return a_; }
    double shift() const { return c_; }
    double log_radius() const { return R_; }
    double scale() const { return scale_; }

    // Multiplicative-constant freedom: cG is p-harmonic with scaled limits.
    GreenProfile scaled(double c) const {
        if (!(c > 0.0))
            throw PreconditionError(ErrorCode::InvalidProfile, "scaling constant must be > 0");
        GreenProfile g = *this;
        g.scale_ *= c;
        if (g.form_ == Form::Custom) {
            auto v = custom_value_, d = custom_derivative_, s2 = custom_second_;
            g.custom_value_ = [v, c](double r) { return c * v(r); };
            g.custom_derivative_ = [d, c](double r) { return c * d(r); };
            if (s2) g.custom_second_ = [s2, c](double r) { return c * s2(r); };
        }
        Classification cls = cls_;
        cls.gamma *= c;
        cls.m *= c;
        cls.M *= c;
        g.cls_ = cls;
        g.inner_ = scale_limit(inner_, c);
        g.outer_ = scale_limit(outer_, c);
        return g;
    }

private:
    GreenProfile() = default;

    static ExtReal scale_limit(ExtReal l, double c) {
        return l.is_infinite() ? ExtReal::infinite() : ExtReal::finite(c * l.value());
    }

    void finalize_limits() {
        inner_ = analytic_limit(true);
        outer_ = analytic_limit(false);
    }

    ExtReal analytic_limit(bool inner) const {
        const double r_end = inner ? dom_.r1 : dom_.r2;
        switch (form_) {
            case Form::Power:
            case Form::PowerShift: {
                const double c = (form_ == Form::Power) ? 0.0 : c_;
                if (r_end == 0.0) {
                    if (a_ < 0.0) return ExtReal::infinite();
                    if (a_ > 0.0) return ExtReal::finite(-scale_ * c);
                    return ExtReal::finite(scale_ * (1.0 - c));
                }
                if (std::isinf(r_end)) {
                    if (a_ > 0.0) return ExtReal::infinite();
                    return ExtReal::finite(-scale_ * c);
                }
                return ExtReal::finite(scale_ * (std::pow(r_end, a_) - c));
            }
            case Form::Log: {
                if (r_end == 0.0 || std::isinf(r_end)) return ExtReal::infinite();
                return ExtReal::finite(scale_ * std::log(r_end / R_));
            }
            case Form::Custom: return ExtReal::finite(0.0);  // supplied by caller
        }
        return ExtReal::finite(0.0);
    }

    double bisect_inverse(double t) const {
        auto [lo, hi] = dom_.sample_range();
        double flo = custom_value_(lo) - t;
        double fhi = custom_value_(hi) - t;
        if (flo * fhi > 0.0)
            throw PreconditionError(ErrorCode::LevelOutOfRange,
                                    "level not bracketed by the profile on its domain");
        for (int i = 0; i < 200; ++i) {
            const double mid = std::sqrt(lo * hi);
            const double fm = custom_value_(mid) - t;
            if (fm == 0.0) return mid;
            if (flo * fm <= 0.0) {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        return std::sqrt(lo * hi);
    }

    Form form_ = Form::Power;
    double a_ = 0.0, c_ = 0.0, rc_ = 1.0, R_ = 1.0, scale_ = 1.0;
    RadialDomain dom_;
    Classification cls_;
    ExtReal inner_ = ExtReal::finite(0.0);
    ExtReal outer_ = ExtReal::finite(0.0);
    std::function<double(double)> custom_value_, custom_derivative_, custom_second_;
};

// Closed-form catalog. Requires Lebesgue measure; combinations without a
// closed-form p-harmonic profile satisfying the end conditions are rejected.
inline GreenProfile green_radial(const ProblemParams& params, const RadialDomain& dom) {
    if (!params.lebesgue())
        throw PreconditionError(ErrorCode::NonLebesgueMeasure,
                                "green_radial catalog covers Lebesgue measure only");
    const double p = params.p;
    const int n = params.n;
    const bool p_eq_n = (p == static_cast<double>(n));
    const double a = p_eq_n ? 0.0 : (p - n) / (p - 1.0);

    switch (dom.kind) {
        case DomainKind::PuncturedSpace: {
            if (p_eq_n)
                throw PreconditionError(
                    ErrorCode::UnsupportedCombination,
                    "punctured space with p == n admits no profile with the required end limits");
            const auto cls = (p < n) ? Classification::a7() : Classification::a8_gamma0();
            return GreenProfile::power(a, 1.0, dom, cls);
        }
        case DomainKind::PuncturedBall: {
            const double R = dom.r2;
            if (p_eq_n) return GreenProfile::log_profile(R, -1.0, dom, Classification::a7());
            if (p < n)
                return GreenProfile::power_shift(a, std::pow(R, a), 1.0, dom,
                                                 Classification::a7());
            const double gamma = std::pow(R, a);
            return GreenProfile::power_shift(a, gamma, -1.0, dom,
                                             Classification::a8_gamma(gamma));
        }
        case DomainKind::Exterior: {
            if (!(p < n))
                throw PreconditionError(ErrorCode::UnsupportedCombination,
                                        "exterior catalog requires p < n");
            const double M = std::pow(dom.r1, a);
            return GreenProfile::power(a, 1.0, dom, Classification::two_ends(0.0, M));
        }
        case DomainKind::Annulus: {
            if (p_eq_n) {
                const double s = 1.0 / std::log(dom.r2 / dom.r1);
                return GreenProfile::log_profile(dom.r1, s, dom,
                                                 Classification::two_ends(0.0, 1.0));
            }
            const double d = std::pow(dom.r2, a) - std::pow(dom.r1, a);
            return GreenProfile::power_shift(a, std::pow(dom.r1, a), 1.0 / d, dom,
                                             Classification::two_ends(0.0, 1.0));
        }
    }
    throw PreconditionError(ErrorCode::UnsupportedCombination, "unknown domain kind");
}

inline std::pair<EndBehavior, EndBehavior> classify_ends(const GreenProfile& G) {
    return {EndBehavior{EndBehavior::Which::Inner, G.limit_inner()},
            EndBehavior{EndBehavior::Which::Outer, G.limit_outer()}};
}

// Classification <-> limits consistency (spec'd case split).
inline void validate_classification(const GreenProfile& G, const ProblemParams& params) {
    const auto& c = G.classification();
    const ExtReal in = G.limit_inner(), out = G.limit_outer();
    auto fail = [](const char* msg) {
        throw PreconditionError(ErrorCode::WrongClassification, msg);
    };
    switch (c.kind) {
        case Classification::Kind::A7:
            if (!(params.p <= params.n)) fail("A7 requires p <= n");
            if (!in.is_infinite() || out.is_infinite() || out.value() != 0.0)
                fail("A7 requires limits (inf, 0)");
            break;
        case Classification::Kind::A8Gamma0:
            if (!(params.p > params.n)) fail("A8Gamma0 requires p > n");
            if (in.is_infinite() || in.value() != 0.0 || !out.is_infinite())
                fail("A8Gamma0 requires limits (0, inf)");
            break;
        case Classification::Kind::A8GammaPos:
            if (!(params.p > params.n)) fail("A8GammaPos requires p > n");
            if (in.is_infinite() || out.is_infinite() || out.value() != 0.0 ||
                std::abs(in.value() - c.gamma) > 1e-12 * std::abs(c.gamma) || !(c.gamma > 0.0))
                fail("A8GammaPos requires limits (gamma, 0) with gamma > 0");
            break;
        case Classification::Kind::TwoEnds: {
            if (in.is_infinite() || out.is_infinite()) fail("TwoEnds requires finite limits");
            const double lo = std::min(in.value(), out.value());
            const double hi = std::max(in.value(), out.value());
            if (lo == hi) fail("TwoEnds requires distinct limits");
            const double s = std::max({1.0, std::abs(lo), std::abs(hi)});
            if (std::abs(lo - c.m) > 1e-12 * s || std::abs(hi - c.M) > 1e-12 * s)
                fail("TwoEnds limits do not match (m, M)");
            break;
        }
    }
}

}  // namespace hardyopt
