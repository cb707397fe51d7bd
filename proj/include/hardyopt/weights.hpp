#pragma once

// Hardy-type weights obtained from supersolution constructions on a radial
// p-harmonic profile G, together with their ground states.
//
//   case1            W = Cp |G'/G|^p                      v = G^{(p-1)/p}
//   case2 (p > n)    W = Cp |G'/(G(g-G))|^p |g-2G|^{p-2}
//                        * [ 2(p-2) G(g-G) + g^2 ]        v = [G(g-G)]^{(p-1)/p}
//   alpha family     W = a^{p-1}(1-a)(p-1) |G'/G|^p       v = G^a
//   two ends, M<inf  W = (p-1) a^{p-1} |G'/v1|^p |m+M-2G|^{p-2}
//                        * [ 2(2a-1) v1 + (1-a)(M-m)^2 ]  v = v1^a, v1 = (G-m)(M-G)
//   two ends, M=inf  W = a^{p-1}(1-a)(p-1) |G'/(G-m)|^p   v = (G-m)^a
//   G / (g-G) blend  W = a(1-a)(p-1) |g(1-a)-G|^{p-2}
//                        * |G'/(G(g-G))|^p                v = G^{1-a}(g-G)^a   (not optimal)
//   quotient form    W = -Delta_p(psi(G)) / psi(G)^{p-1}, psi(s) = [s(g-s)]^{(p-1)/p}
// with Cp = ((p-1)/p)^p. The radial interpolation v_a = v1^a v0^{1-a} of two
// supersolutions and the sign-definite potential envelope are provided as
// supersolution_construct_radial and convex_combination_potential.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hardyopt/calculus.hpp"
#include "hardyopt/common.hpp"
#include "hardyopt/domain.hpp"

namespace hardyopt {

enum class WeightKind {
    Case1,
    Case2,
    Alpha,
    TwoEndsBounded,
    TwoEndsUnbounded,
    Cor84,
    Eq85,
    Supersolution,
};

inline std::string weight_kind_name(WeightKind k) {
    switch (k) {
        case WeightKind::Case1: return "case1";
        case WeightKind::Case2: return "case2";
        case WeightKind::Alpha: return "alpha";
        case WeightKind::TwoEndsBounded: return "two_ends";
        case WeightKind::TwoEndsUnbounded: return "two_ends_unbounded";
        case WeightKind::Cor84: return "g_blend";
        case WeightKind::Eq85: return "quotient";
        case WeightKind::Supersolution: return "supersolution";
    }
    return "?";
}

struct ConstructionTag {
    WeightKind kind = WeightKind::Case1;
    double alpha = 0.0;
    double gamma = 0.0;
    double m = 0.0;
    double M = 0.0;
};

struct PotentialProfile {
    std::function<double(double)> value;
    static PotentialProfile zero() {
        return {[](double) { return 0.0; }};
    }
};

class Weight {
public:
    Weight(std::function<double(double)> eval, ConstructionTag tag,
           std::optional<double> expected_lambda0, bool claims_optimal)
        : eval_(std::move(eval)),
          tag_(tag),
          expected_lambda0_(expected_lambda0),
          claims_optimal_(claims_optimal) {}

    double operator()(double r) const { return eval_(r); }
    const ConstructionTag& tag() const { return tag_; }
    std::optional<double> expected_lambda0() const { return expected_lambda0_; }
    bool claims_optimal() const { return claims_optimal_; }

    Weight scaled(double c) const {
        auto e = eval_;
        return Weight([e, c](double r) { return c * e(r); }, tag_,
                      expected_lambda0_ ? std::optional<double>(*expected_lambda0_ / c)
                                        : std::nullopt,
                      claims_optimal_);
    }

private:
    std::function<double(double)> eval_;
    ConstructionTag tag_;
    std::optional<double> expected_lambda0_;
    bool claims_optimal_;
};

// r-intervals, ordered, pairwise disjoint.
using LevelSet = std::vector<std::pair<double, double>>;

class GroundState {
public:
    GroundState(std::function<double(double)> value, std::function<double(double)> derivative,
                std::function<double(double)> second, ConstructionTag tag, RadialDomain dom,
                std::function<LevelSet(double, double)> level_set, double sup_value,
                bool unbounded_end)
        : value_(std::move(value)),
          derivative_(std::move(derivative)),
          second_(std::move(second)),
          tag_(tag),
          dom_(dom),
          level_set_(std::move(level_set)),
          sup_(sup_value),
          unbounded_end_(unbounded_end) {}

    double operator()(double r) const { return value_(r); }
    double value(double r) const { return value_(r); }
    double derivative(double r) const { return derivative_(r); }
    double second_derivative(double r) const { return second_(r); }
    const ConstructionTag& tag() const { return tag_; }
    const RadialDomain& domain() const { return dom_; }
    double sup_value() const { return sup_; }
    // True when v tends to infinity at one end (two-sided cutoffs apply);
    // false when v vanishes at both ends (one-sided cutoffs apply).
    bool has_unbounded_end() const { return unbounded_end_; }
    // {r : lo < v(r) < hi} as a union of intervals.
    LevelSet level_set(double lo, double hi) const { return level_set_(lo, hi); }

    RadialFunction as_radial() const {
        auto v = value_;
        auto d = derivative_;
        auto s = second_;
        return {v, d, s};
    }

private:
    std::function<double(double)> value_, derivative_, second_;
    ConstructionTag tag_;
    RadialDomain dom_;
    std::function<LevelSet(double, double)> level_set_;
    double sup_;
    bool unbounded_end_;
};

// ---------------------------------------------------------------------------
// Pointwise weight formulas as functions of (G, G') at a radius. These are the
// displayed closed forms; the public constructors below add preconditions,
// ground states, and metadata.

inline double case1_weight_value(double p, double G, double dG) {
    return std::pow((p - 1.0) / p, p) * std::pow(std::abs(dG / G), p);
}

inline double case2_weight_value(double p, double gamma, double G, double dG) {
    const double u = G * (gamma - G);
    const double bracket = 2.0 * (p - 2.0) * u + gamma * gamma;
    return std::pow((p - 1.0) / p, p) * std::pow(std::abs(dG / u), p) *
           pow_abs(gamma - 2.0 * G, p - 2.0) * bracket;
}

inline double alpha_weight_value(double p, double alpha, double G, double dG) {
    return std::pow(alpha, p - 1.0) * (1.0 - alpha) * (p - 1.0) *
           std::pow(std::abs(dG / G), p);
}

inline double two_ends_weight_value(double p, double alpha, double m, double M, double G,
                                    double dG) {
    const double v1 = (G - m) * (M - G);
    const double bracket = 2.0 * (2.0 * alpha - 1.0) * v1 + (1.0 - alpha) * (M - m) * (M - m);
    return (p - 1.0) * std::pow(alpha, p - 1.0) * std::pow(std::abs(dG / v1), p) *
           pow_abs(m + M - 2.0 * G, p - 2.0) * bracket;
}

inline double cor84_weight_value(double p, double alpha, double gamma, double G, double dG) {
    return alpha * (1.0 - alpha) * (p - 1.0) * pow_abs(gamma * (1.0 - alpha) - G, p - 2.0) *
           std::pow(std::abs(dG / (G * (gamma - G))), p);
}

// Hessian entries of f(xi, eta) = xi^{p-1} eta^{2-p} on the positive quadrant.
// The matrix is rank one: det == 0, trace sign == sign((p-1)(p-2)).
struct HessianSample {
    double fxx, fxy, fyy;
    double trace() const { return fxx + fyy; }
    double det() const { return fxx * fyy - fxy * fxy; }
};

inline HessianSample xi_eta_hessian(double p, double xi, double eta) {
    const double fxx = (p - 1.0) * (p - 2.0) * std::pow(xi, p - 3.0) * std::pow(eta, 2.0 - p);
    const double fxy = (p - 1.0) * (2.0 - p) * std::pow(xi, p - 2.0) * std::pow(eta, 1.0 - p);
    const double fyy = (2.0 - p) * (1.0 - p) * std::pow(xi, p - 1.0) * std::pow(eta, -p);
    return {fxx, fxy, fyy};
}

// ---------------------------------------------------------------------------
// Internal helpers.

namespace detail {

inline void check_nonvanishing_gradient(const GreenProfile& G) {
    const auto [lo, hi] = G.domain().sample_range();
    for (int i = 0; i <= 32; ++i) {
        const double r = lo * std::pow(hi / lo, i / 32.0);
        if (G.derivative(r) == 0.0)
            throw PreconditionError(ErrorCode::VanishingDerivative,
                                    "profile derivative vanishes at a sampled radius");
    }
}

// Monotone v: {lo < v < hi} is one interval.
inline std::function<LevelSet(double, double)> monotone_level_set(
    const GreenProfile& G, std::function<double(double)> G_of_v) {
    return [G, G_of_v = std::move(G_of_v)](double lo, double hi) -> LevelSet {
        if (!(lo < hi)) return {};
        const double ra = G.inverse(G_of_v(lo));
        const double rb = G.inverse(G_of_v(hi));
        return {{std::min(ra, rb), std::max(ra, rb)}};
    };
}

// Level sets of a bump-shaped v: v increases on (inner end, r_star], falls on
// [r_star, outer end), vanishing at both ends. Each monotone branch is
// bisected in log r against the exact value evaluator; levels unreachable
// within representable radii clamp to the branch endpoint (the omitted tail
// carries negligible mass).
inline std::function<LevelSet(double, double)> bump_level_set(
    const RadialDomain& dom, std::function<double(double)> value, double r_star) {
    return [dom, value = std::move(value), r_star](double lo, double hi) -> LevelSet {
        const double v_max = value(r_star);
        if (!(lo < hi) || lo >= v_max) return {};
        const double lo_end =
            dom.r1 > 0.0 ? dom.r1 * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())
                         : r_star * 1e-250;
        const double hi_end = std::isfinite(dom.r2)
                                  ? dom.r2 * (1.0 - 4.0 * std::numeric_limits<double>::epsilon())
                                  : r_star * 1e250;
        auto solve = [&](double ra, double rb, double target) {
            // value - target changes sign between ra and rb unless the level
            // is unreachable; geometric bisection in that case parks at the
            // endpoint.
            double fa = value(ra) - target;
            for (int i = 0; i < 200; ++i) {
                const double mid = std::sqrt(ra * rb);
                const double fm = value(mid) - target;
                if ((fa <= 0.0) == (fm <= 0.0)) {
                    ra = mid;
                    fa = fm;
                } else {
                    rb = mid;
                }
            }
            return std::sqrt(ra * rb);
        };
        LevelSet out;
        if (hi >= v_max) {
            out.push_back({solve(lo_end, r_star, lo), solve(hi_end, r_star, lo)});
        } else {
            out.push_back({solve(lo_end, r_star, lo), solve(lo_end, r_star, hi)});
            out.push_back({solve(hi_end, r_star, hi), solve(hi_end, r_star, lo)});
        }
        for (auto& seg : out)
            if (seg.first > seg.second) std::swap(seg.first, seg.second);
        std::sort(out.begin(), out.end());
        return out;
    };
}


// Ground state of product form [(G - m)(M - G)]^e, evaluated through the
// profile's cancellation-free gap() so that both factors keep full relative
// accuracy near the ends. A = G - m, B = M - G.
inline GroundState product_ground_state(const GreenProfile& G, double m, double M, double e,
                                        ConstructionTag tag,
                                        std::function<LevelSet(double, double)> level_set,
                                        double sup_value) {
    auto A = [G, m](double r) { return -G.gap(m, r); };
    auto B = [G, M](double r) { return G.gap(M, r); };
    auto value = [A, B, e](double r) { return std::pow(A(r) * B(r), e); };
    auto deriv = [G, A, B, e](double r) {
        const double a = A(r), b = B(r);
        return e * std::pow(a * b, e - 1.0) * G.derivative(r) * (b - a);
    };
    auto second = [G, A, B, e](double r) {
        const double a = A(r), b = B(r);
        const double dg = G.derivative(r);
        const double diff = b - a;
        return e * (e - 1.0) * std::pow(a * b, e - 2.0) * dg * dg * diff * diff +
               e * std::pow(a * b, e - 1.0) *
                   (G.second_derivative(r) * diff - 2.0 * dg * dg);
    };
    return GroundState(value, deriv, second, tag, G.domain(), std::move(level_set), sup_value,
                       false);
}

// Ground state v = f(G) with analytic derivatives of f.
inline GroundState composed_ground_state(const GreenProfile& G, const ScalarC2& f,
                                         ConstructionTag tag,
                                         std::function<LevelSet(double, double)> level_set,
                                         double sup_value, bool unbounded_end) {
    auto value = [G, f](double r) { return f.f(G.value(r)); };
    auto deriv = [G, f](double r) { return f.df(G.value(r)) * G.derivative(r); };
    auto second = [G, f](double r) {
        const double g = G.value(r);
        const double dg = G.derivative(r);
        return f.d2f(g) * dg * dg + f.df(g) * G.second_derivative(r);
    };
    return GroundState(value, deriv, second, tag, G.domain(), std::move(level_set), sup_value,
                       unbounded_end);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Constructions.

// Theorem case (1): G classified A7 or A8Gamma0.
inline std::pair<Weight, GroundState> hardy_weight_case1(const GreenProfile& G,
                                                         const ProblemParams& params) {
    const auto kind = G.classification().kind;
    if (kind != Classification::Kind::A7 && kind != Classification::Kind::A8Gamma0)
        throw PreconditionError(ErrorCode::WrongClassification,
                                "case1 weight requires an A7 or A8Gamma0 profile");
    detail::check_nonvanishing_gradient(G);
    const double p = params.p;
    const double q = (p - 1.0) / p;
    ConstructionTag tag{WeightKind::Case1, q, 0, 0, 0};
    Weight W([G, p](double r) { return case1_weight_value(p, G.value(r), G.derivative(r)); },
             tag, 1.0, true);
    auto level = detail::monotone_level_set(G, [q](double v) { return std::pow(v, 1.0 / q); });
    GroundState v = detail::composed_ground_state(
        G, ScalarC2::power(q), tag, level, std::numeric_limits<double>::infinity(), true);
    return {std::move(W), std::move(v)};
}

// Theorem case (2): p > n and G classified A8GammaPos(gamma).
inline std::pair<Weight, GroundState> hardy_weight_case2(const GreenProfile& G, double gamma,
                                                         const ProblemParams& params) {
    if (!(params.p > params.n))
        throw PreconditionError(ErrorCode::WrongClassification, "case2 weight requires p > n");
    const auto& cls = G.classification();
    if (cls.kind != Classification::Kind::A8GammaPos)
        throw PreconditionError(ErrorCode::WrongClassification,
                                "case2 weight requires an A8GammaPos profile");
    if (std::abs(cls.gamma - gamma) > 1e-12 * std::abs(gamma))
        throw PreconditionError(ErrorCode::GammaMismatch,
                                "gamma does not match the profile's inner limit");
    detail::check_nonvanishing_gradient(G);
    const double p = params.p;
    const double q = (p - 1.0) / p;
    ConstructionTag tag{WeightKind::Case2, q, gamma, 0.0, gamma};
    Weight W([G, p, gamma](double r) {
                 const double a = G.value(r);
                 const double b = G.gap(gamma, r);
                 const double u = a * b;
                 const double bracket = 2.0 * (p - 2.0) * u + gamma * gamma;
                 return std::pow((p - 1.0) / p, p) *
                        std::pow(std::abs(G.derivative(r) / u), p) *
                        pow_abs(b - a, p - 2.0) * bracket;
             },
             tag, 1.0, true);
    const double sup_v = std::pow(0.25 * gamma * gamma, q);
    auto value = [G, gamma, q](double r) {
        return std::pow(-G.gap(0.0, r) * G.gap(gamma, r), q);
    };
    GroundState v = detail::product_ground_state(
        G, 0.0, gamma, q, tag,
        detail::bump_level_set(G.domain(), value, G.inverse(0.5 * gamma)), sup_v);
    return {std::move(W), std::move(v)};
}

// One-parameter family W_alpha with ground state G^alpha; optimal only at
// alpha = (p-1)/p.
inline std::pair<Weight, GroundState> hardy_weight_alpha(const GreenProfile& G, double alpha,
                                                         const ProblemParams& params) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw PreconditionError(ErrorCode::AlphaOutOfRange,
                                "alpha family requires alpha in (0, 1)");
    detail::check_nonvanishing_gradient(G);
    const double p = params.p;
    const bool optimal = std::abs(alpha - (p - 1.0) / p) <= 1e-14;
    ConstructionTag tag{WeightKind::Alpha, alpha, 0, 0, 0};
    Weight W(
        [G, p, alpha](double r) {
            return alpha_weight_value(p, alpha, G.value(r), G.derivative(r));
        },
        tag, optimal ? std::optional<double>(1.0) : std::nullopt, optimal);
    auto level = detail::monotone_level_set(
        G, [alpha](double v) { return std::pow(v, 1.0 / alpha); });
    GroundState v = detail::composed_ground_state(
        G, ScalarC2::power(alpha), tag, level, std::numeric_limits<double>::infinity(), true);
    return {std::move(W), std::move(v)};
}

// Two-ends construction. Bounded branch (M < inf) uses v1 = (G-m)(M-G); the
// unbounded branch (M = inf) uses v1 = G - m. Admissible alpha: [1/2, 1] when
// m > 0, [0, 1] when m = 0 (bounded branch).
inline std::pair<Weight, GroundState> hardy_weight_two_ends(const GreenProfile& G, double m,
                                                            double M, double alpha,
                                                            const ProblemParams& params) {
    const double p = params.p;
    const double q = (p - 1.0) / p;
    const ExtReal lim_in = G.limit_inner(), lim_out = G.limit_outer();
    detail::check_nonvanishing_gradient(G);

    if (std::isinf(M)) {
        const double lim_min =
            std::min(lim_in.is_infinite() ? std::numeric_limits<double>::infinity()
                                          : lim_in.value(),
                     lim_out.is_infinite() ? std::numeric_limits<double>::infinity()
                                           : lim_out.value());
        if (!lim_in.is_infinite() && !lim_out.is_infinite())
            throw PreconditionError(ErrorCode::EndLimitMismatch,
                                    "unbounded two-ends branch requires an infinite end limit");
        if (std::abs(lim_min - m) > 1e-12 * std::max(1.0, std::abs(m)))
            throw PreconditionError(ErrorCode::EndLimitMismatch,
                                    "m must equal the finite end limit of G");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw PreconditionError(ErrorCode::AlphaOutOfRange,
                                    "unbounded two-ends branch requires alpha in (0, 1)");
        const bool optimal = std::abs(alpha - q) <= 1e-14;
        ConstructionTag tag{WeightKind::TwoEndsUnbounded, alpha, 0, m,
                            std::numeric_limits<double>::infinity()};
        Weight W(
            [G, p, alpha, m](double r) {
                return alpha_weight_value(p, alpha, G.value(r) - m, G.derivative(r));
            },
            tag, optimal ? std::optional<double>(1.0) : std::nullopt, optimal);
        ScalarC2 f{[m, alpha](double s) { return std::pow(s - m, alpha); },
                   [m, alpha](double s) { return alpha * std::pow(s - m, alpha - 1.0); },
                   [m, alpha](double s) {
                       return alpha * (alpha - 1.0) * std::pow(s - m, alpha - 2.0);
                   }};
        auto level = detail::monotone_level_set(
            G, [m, alpha](double v) { return m + std::pow(v, 1.0 / alpha); });
        GroundState v = detail::composed_ground_state(
            G, f, tag, level, std::numeric_limits<double>::infinity(), true);
        return {std::move(W), std::move(v)};
    }

    const auto& cls = G.classification();
    if (cls.kind != Classification::Kind::TwoEnds)
        throw PreconditionError(ErrorCode::EndLimitMismatch,
                                "bounded two-ends branch requires a TwoEnds profile");
    const double s = std::max({1.0, std::abs(m), std::abs(M)});
    if (std::abs(cls.m - m) > 1e-12 * s || std::abs(cls.M - M) > 1e-12 * s)
        throw PreconditionError(ErrorCode::EndLimitMismatch,
                                "(m, M) must equal the end limits of G");
    const bool alpha_ok = (m > 0.0) ? (alpha >= 0.5 && alpha <= 1.0)
                                    : (alpha >= 0.0 && alpha <= 1.0);
    if (!alpha_ok)
        throw PreconditionError(ErrorCode::AlphaOutOfRange,
                                m > 0.0 ? "two-ends weight with m > 0 requires alpha in [1/2, 1]"
                                        : "two-ends weight requires alpha in [0, 1]");
    const bool optimal = std::abs(alpha - q) <= 1e-14 && (m == 0.0 || p >= 2.0);
    ConstructionTag tag{WeightKind::TwoEndsBounded, alpha, 0, m, M};
    Weight W(
        [G, p, alpha, m, M](double r) {
            const double a = -G.gap(m, r);   // G - m
            const double b = G.gap(M, r);    // M - G
            const double v1 = a * b;
            const double bracket =
                2.0 * (2.0 * alpha - 1.0) * v1 + (1.0 - alpha) * (M - m) * (M - m);
            return (p - 1.0) * std::pow(alpha, p - 1.0) *
                   std::pow(std::abs(G.derivative(r) / v1), p) * pow_abs(b - a, p - 2.0) *
                   bracket;
        },
        tag, optimal ? std::optional<double>(1.0) : std::nullopt, optimal);
    const double sup_v = std::pow(0.25 * (M - m) * (M - m), alpha);
    auto value = [G, m, M, alpha](double r) {
        return std::pow(-G.gap(m, r) * G.gap(M, r), alpha);
    };
    GroundState v = detail::product_ground_state(
        G, m, M, alpha, tag,
        detail::bump_level_set(G.domain(), value, G.inverse(0.5 * (m + M))), sup_v);
    return {std::move(W), std::move(v)};
}

// Interpolation G^{1-alpha} (gamma-G)^{alpha}; subcritical for every alpha.
inline std::pair<Weight, GroundState> cor84_weight(const GreenProfile& G, double gamma,
                                                   double alpha, const ProblemParams& params) {
    if (!(params.p > params.n))
        throw PreconditionError(ErrorCode::WrongClassification, "requires p > n");
    const auto& cls = G.classification();
    if (cls.kind != Classification::Kind::A8GammaPos ||
        std::abs(cls.gamma - gamma) > 1e-12 * std::abs(gamma))
        throw PreconditionError(ErrorCode::WrongClassification,
                                "requires an A8GammaPos profile with matching gamma");
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw PreconditionError(ErrorCode::AlphaOutOfRange, "requires alpha in [0, 1]");
    detail::check_nonvanishing_gradient(G);
    const double p = params.p;
    ConstructionTag tag{WeightKind::Cor84, alpha, gamma, 0, gamma};
    Weight W(
        [G, p, alpha, gamma](double r) {
            const double a = G.value(r);
            const double b = G.gap(gamma, r);
            return alpha * (1.0 - alpha) * (p - 1.0) * pow_abs(b - alpha * gamma, p - 2.0) *
                   std::pow(std::abs(G.derivative(r) / (a * b)), p);
        },
        tag, std::nullopt, false);
    // v = A^{1-alpha} B^alpha with A = G, B = gamma - G.
    auto value = [G, gamma, alpha](double r) {
        return std::pow(G.value(r), 1.0 - alpha) * std::pow(G.gap(gamma, r), alpha);
    };
    std::function<LevelSet(double, double)> level;
    double sup_v;
    if (alpha == 0.0) {
        level = detail::monotone_level_set(G, [](double v) { return v; });
        sup_v = gamma;
    } else if (alpha == 1.0) {
        level = detail::monotone_level_set(G, [gamma](double v) { return gamma - v; });
        sup_v = gamma;
    } else {
        const double G_star = (1.0 - alpha) * gamma;
        sup_v = std::pow(G_star, 1.0 - alpha) * std::pow(gamma - G_star, alpha);
        level = detail::bump_level_set(G.domain(), value, G.inverse(G_star));
    }
    auto logd = [G, gamma, alpha](double r) {
        return G.derivative(r) * ((1.0 - alpha) / G.value(r) - alpha / G.gap(gamma, r));
    };
    auto deriv = [value, logd](double r) { return value(r) * logd(r); };
    auto second = [G, gamma, alpha, value, logd](double r) {
        const double a = G.value(r), b = G.gap(gamma, r);
        const double dg = G.derivative(r);
        const double L = logd(r);
        const double Lp = G.second_derivative(r) * ((1.0 - alpha) / a - alpha / b) +
                          dg * dg * (-(1.0 - alpha) / (a * a) - alpha / (b * b));
        return value(r) * (L * L + Lp);
    };
    GroundState v(value, deriv, second, tag, G.domain(), level, sup_v, false);
    return {std::move(W), std::move(v)};
}

// Quotient form W = -Delta_p(psi(G)) / psi(G)^{p-1}: same hypotheses and, in
// exact arithmetic, the same output as hardy_weight_case2, evaluated through
// the chain rule instead of the displayed closed form.
inline std::pair<Weight, GroundState> eq85_weight(const GreenProfile& G, double gamma,
                                                  const ProblemParams& params) {
    auto [w_closed, v] = hardy_weight_case2(G, gamma, params);
    const double p = params.p;
    const double q = (p - 1.0) / p;
    ConstructionTag tag{WeightKind::Eq85, q, gamma, 0.0, gamma};
    auto u = RadialFunction::from_profile(G);
    ProblemParams pp = params;
    Weight W(
        [G, pp, gamma, q, u](double r) {
            const double a = G.value(r);
            const double b = G.gap(gamma, r);
            const double dg = G.derivative(r);
            const double uu = a * b;
            const double diff = b - a;  // gamma - 2G
            const double fp = q * std::pow(uu, q - 1.0) * diff;
            const double fpp = q * (q - 1.0) * std::pow(uu, q - 2.0) * diff * diff -
                               2.0 * q * std::pow(uu, q - 1.0);
            const double minus_lap_G = p_laplacian_radial_at(u, pp, r);
            const double minus_lap_psi =
                pow_abs(fp, pp.p - 2.0) *
                (fp * minus_lap_G - (pp.p - 1.0) * fpp * std::pow(std::abs(dg), pp.p));
            return minus_lap_psi / std::pow(std::pow(uu, q), pp.p - 1.0);
        },
        tag, 1.0, true);
    GroundState v2(
        [v](double r) { return v.value(r); }, [v](double r) { return v.derivative(r); },
        [v](double r) { return v.second_derivative(r); }, tag, v.domain(),
        [v](double lo, double hi) { return v.level_set(lo, hi); }, v.sup_value(), false);
    return {std::move(W), std::move(v2)};
}

// ---------------------------------------------------------------------------
// Radial supersolution interpolation and the sign-definite potential envelope.

struct SupersolutionResult {
    GroundState v_alpha;
    PotentialProfile V_alpha;
    Weight W_alpha;
};

// v_alpha = v1^alpha v0^{1-alpha} with
//   V_alpha = ((1-a) V0 |(log v0)'|^{2-p} + a V1 |(log v1)'|^{2-p}) |(log v_a)'|^{p-2}
//   W_alpha = a(1-a)(p-1) |(log(v0/v1))'|^2 |(log v_a)'|^{p-2}.
// The derivative hypotheses are sampled on 10^3 radii of `dom`; that sampling
// stands in for the global nonvanishing hypothesis.
inline SupersolutionResult supersolution_construct_radial(
    const RadialFunction& v0, const PotentialProfile& V0, const RadialFunction& v1,
    const PotentialProfile& V1, double alpha, const ProblemParams& params,
    const RadialDomain& dom) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw PreconditionError(ErrorCode::AlphaOutOfRange, "requires alpha in [0, 1]");
    if (!v0.has_second() || !v1.has_second())
        throw PreconditionError(ErrorCode::MissingSecondDerivative,
                                "supersolution inputs must be twice differentiable");
    // Sampled stand-in for the nonvanishing-derivative hypotheses: reject
    // only configurations where a |log .|' factor with a negative exponent is
    // hit at a zero. |(log v_j)'|^{2-p} blows up for p > 2 only where V_j is
    // active; |(log v_alpha)'|^{p-2} blows up for p < 2.
    const auto [lo, hi] = dom.sample_range();
    const double p_chk = params.p;
    for (int i = 0; i <= 1000; ++i) {
        const double r = lo * std::pow(hi / lo, i / 1000.0);
        const double L0 = v0.derivative(r) / v0.value(r);
        const double L1 = v1.derivative(r) / v1.value(r);
        const double La = (1.0 - alpha) * L0 + alpha * L1;
        bool bad = false;
        if (p_chk > 2.0) {
            bad = (alpha < 1.0 && L0 == 0.0 && V0.value(r) != 0.0) ||
                  (alpha > 0.0 && L1 == 0.0 && V1.value(r) != 0.0);
        } else if (p_chk < 2.0) {
            bad = (La == 0.0 && (alpha > 0.0 && alpha < 1.0) && L0 != L1);
        }
        if (bad)
            throw PreconditionError(ErrorCode::VanishingDerivative,
                                    "a log-derivative vanishes at a sampled radius");
    }
    const double p = params.p;
    auto value = [v0, v1, alpha](double r) {
        return std::pow(v1.value(r), alpha) * std::pow(v0.value(r), 1.0 - alpha);
    };
    auto logd = [v0, v1, alpha](double r) {
        return (1.0 - alpha) * v0.derivative(r) / v0.value(r) +
               alpha * v1.derivative(r) / v1.value(r);
    };
    auto deriv = [value, logd](double r) { return value(r) * logd(r); };
    auto second = [value, logd, v0, v1, alpha](double r) {
        auto curv = [](const RadialFunction& f, double r_) {
            const double fv = f.value(r_), fd = f.derivative(r_), f2 = f.second_derivative(r_);
            return f2 / fv - (fd / fv) * (fd / fv);
        };
        const double Lp = (1.0 - alpha) * curv(v0, r) + alpha * curv(v1, r);
        const double L = logd(r);
        return value(r) * (L * L + Lp);
    };
    PotentialProfile Va{[v0, v1, V0, V1, alpha, p, logd](double r) {
        // Zero potentials contribute nothing even where their |log .|'^{2-p}
        // factor is singular.
        auto term = [p](double coeff, double V, const RadialFunction& f, double r_) {
            if (coeff == 0.0 || V == 0.0) return 0.0;
            return coeff * V * pow_abs(f.derivative(r_) / f.value(r_), 2.0 - p);
        };
        const double base = term(1.0 - alpha, V0.value(r), v0, r) +
                            term(alpha, V1.value(r), v1, r);
        if (base == 0.0) return 0.0;
        return base * pow_abs(logd(r), p - 2.0);
    }};
    ConstructionTag tag{WeightKind::Supersolution, alpha, 0, 0, 0};
    Weight Wa(
        [v0, v1, alpha, p, logd](double r) {
            const double d = v0.derivative(r) / v0.value(r) - v1.derivative(r) / v1.value(r);
            return alpha * (1.0 - alpha) * (p - 1.0) * d * d * pow_abs(logd(r), p - 2.0);
        },
        tag, std::nullopt, false);
    // v_alpha is monotone on dom (its log-derivative never vanishes).
    RadialDomain dcopy = dom;
    auto level = [value, dcopy](double lo_v, double hi_v) -> LevelSet {
        auto [a, b] = dcopy.sample_range();
        auto solve = [&](double target) {
            double x = a, y = b;
            double fx = value(x) - target;
            for (int i = 0; i < 200; ++i) {
                const double mid = std::sqrt(x * y);
                const double fm = value(mid) - target;
                if (fm == 0.0) return mid;
                if (fx * fm <= 0.0) {
                    y = mid;
                } else {
                    x = mid;
                    fx = fm;
                }
            }
            return std::sqrt(x * y);
        };
        const double ra = solve(lo_v), rb = solve(hi_v);
        return {{std::min(ra, rb), std::max(ra, rb)}};
    };
    GroundState va(value, deriv, second, tag, dom, level,
                   std::numeric_limits<double>::infinity(), true);
    return {std::move(va), std::move(Va), std::move(Wa)};
}

// Sign-definite envelope +-((1-a)|V0|^{1/(p-1)} + a|V1|^{1/(p-1)})^{p-1}; the
// minus sign when the inputs are nonpositive. Requires V0, V1 >= 0 when
// 1 < p <= 2 and V0, V1 <= 0 when p >= 2.
inline PotentialProfile convex_combination_potential(const PotentialProfile& V0,
                                                     const PotentialProfile& V1, double alpha,
                                                     const ProblemParams& params,
                                                     const RadialDomain& dom) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw PreconditionError(ErrorCode::AlphaOutOfRange, "requires alpha in [0, 1]");
    const double p = params.p;
    const auto [lo, hi] = dom.sample_range();
    int sign = 0;
    for (int i = 0; i <= 256; ++i) {
        const double r = lo * std::pow(hi / lo, i / 256.0);
        for (const auto* V : {&V0, &V1}) {
            const double val = V->value(r);
            if (val == 0.0) continue;
            const int s = val > 0.0 ? 1 : -1;
            if (sign == 0) sign = s;
            if (s != sign)
                throw PreconditionError(ErrorCode::SignConditionViolated,
                                        "potentials must share a definite sign");
        }
    }
    if (sign > 0 && p > 2.0)
        throw PreconditionError(ErrorCode::SignConditionViolated,
                                "p >= 2 requires nonpositive potentials");
    if (sign < 0 && p < 2.0)
        throw PreconditionError(ErrorCode::SignConditionViolated,
                                "1 < p <= 2 requires nonnegative potentials");
    const double sgn_out = sign < 0 ? -1.0 : 1.0;
    return {[V0, V1, alpha, p, sgn_out](double r) {
        const double e = 1.0 / (p - 1.0);
        const double mix = (1.0 - alpha) * std::pow(std::abs(V0.value(r)), e) +
                           alpha * std::pow(std::abs(V1.value(r)), e);
        return sgn_out * std::pow(mix, p - 1.0);
    }};
}

// ---------------------------------------------------------------------------
// Residual diagnostics.

// Signed strong-form residual of Q_{V}(v) = -Delta_p v + V |v|^{p-2} v at r,
// together with the magnitude scale of its terms.
inline std::pair<double, double> q_residual(const GroundState& v, const PotentialProfile& V,
                                            const ProblemParams& params, double r) {
    auto u = v.as_radial();
    const double lap = p_laplacian_radial_at(u, params, r);
    const double pot = V.value(r) * std::pow(v.value(r), params.p - 1.0);
    return {lap + pot, std::abs(lap) + std::abs(pot)};
}

// Relative residual of the critical equation Q_{-W}(v) = 0.
inline double ground_state_residual(const Weight& W, const GroundState& v,
                                    const ProblemParams& params, double r) {
    auto u = v.as_radial();
    const double lap = p_laplacian_radial_at(u, params, r);
    const double pot = W(r) * std::pow(v.value(r), params.p - 1.0);
    const double scale = std::abs(lap) + std::abs(pot);
    const double res = lap - pot;
    return scale > 0.0 ? std::abs(res) / scale : std::abs(res);
}

}  // namespace hardyopt
