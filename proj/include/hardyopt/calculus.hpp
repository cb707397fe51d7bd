#pragma once

// Radial differential operators and the coarea machinery.
//
// For a radial C^2 function v and measure d nu = omega_{n-1} r^{n-1} sigma dr,
//   -Delta_p(v) = -|v'|^{p-2} [ (p-1) v'' + ((n-1)/r) v' ]  - |v'|^{p-2} v' (sigma'/sigma).
// The weak chain rule for f in C^2,
//   -Delta_p(f(u)) = -|f'(u)|^{p-2} [ (p-1) f''(u) |u'|^p + f'(u) Delta_p(u) ],
// and the coarea reduction for a p-harmonic profile G with v = G^{(p-1)/p}:
//   int f(v) |grad v|^p d nu = c     int f(tau) dtau/tau,
//   int g(G) |grad G|^p d nu = c~    int g(t) dt,
// where c~ is the (t-independent) flux int_{G=t} |grad G|^{p-1} d sigma and
// c = ((p-1)/p)^{p-1} c~.

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "hardyopt/common.hpp"
#include "hardyopt/domain.hpp"
#include "hardyopt/quadrature.hpp"

namespace hardyopt {

struct RadialFunction {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    std::function<double(double)> second_derivative;  // may be empty

    bool has_second() const { return static_cast<bool>(second_derivative); }

    static RadialFunction from_profile(const GreenProfile& G) {
        return {[G](double r) { return G.value(r); },
                [G](double r) { return G.derivative(r); },
                [G](double r) { return G.second_derivative(r); }};
    }
    static RadialFunction power(double beta, double scale = 1.0) {
        return {[=](double r) { return scale * std::pow(r, beta); },
                [=](double r) { return scale * beta * std::pow(r, beta - 1.0); },
                [=](double r) { return scale * beta * (beta - 1.0) * std::pow(r, beta - 2.0); }};
    }
    static RadialFunction constant(double c) {
        return {[=](double) { return c; }, [](double) { return 0.0; },
                [](double) { return 0.0; }};
    }
};

// Scalar C^2 function of one variable, for compositions f(u).
struct ScalarC2 {
    std::function<double(double)> f;
    std::function<double(double)> df;
    std::function<double(double)> d2f;

    static ScalarC2 power(double alpha) {
        return {[=](double s) { return std::pow(s, alpha); },
                [=](double s) { return alpha * std::pow(s, alpha - 1.0); },
                [=](double s) { return alpha * (alpha - 1.0) * std::pow(s, alpha - 2.0); }};
    }
    static ScalarC2 identity() {
        return {[](double s) { return s; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
    }
};

// Pointwise -Delta_p u at radius r.
inline double p_laplacian_radial_at(const RadialFunction& u, const ProblemParams& params,
                                    double r) {
    if (!u.has_second())
        throw PreconditionError(ErrorCode::MissingSecondDerivative,
                                "p_laplacian_radial requires a second derivative");
    const double du = u.derivative(r);
    const double d2u = u.second_derivative(r);
    const double core = (params.p - 1.0) * d2u + (params.n - 1.0) / r * du;
    double out = -pow_abs(du, params.p - 2.0) * core;
    if (!params.lebesgue())
        out -= pow_abs(du, params.p - 2.0) * du * params.sigma_log_derivative(r);
    return out;
}

inline RadialFunction p_laplacian_radial(const RadialFunction& u, const ProblemParams& params) {
    if (!u.has_second())
        throw PreconditionError(ErrorCode::MissingSecondDerivative,
                                "p_laplacian_radial requires a second derivative");
    return {[u, params](double r) { return p_laplacian_radial_at(u, params, r); }, {}, {}};
}

// -Delta_p(f(u)) through the weak chain rule; f' must not vanish on the range
// of u (checked on a sample of radii spanning `dom`).
inline RadialFunction chain_rule_plap(const ScalarC2& f, const RadialFunction& u,
                                      const ProblemParams& params, const RadialDomain& dom) {
    const auto [lo, hi] = dom.sample_range();
    for (int i = 0; i <= 64; ++i) {
        const double r = lo * std::pow(hi / lo, i / 64.0);
        if (f.df(u.value(r)) == 0.0)
            throw PreconditionError(ErrorCode::DerivativeVanishes,
                                    "chain_rule_plap: f' vanishes at a sampled radius");
    }
    auto mu = p_laplacian_radial(u, params);
    ProblemParams pp = params;
    return {[f, u, pp, mu](double r) {
                const double s = u.value(r);
                const double du = u.derivative(r);
                const double fp = f.df(s);
                const double fpp = f.d2f(s);
                // Delta_p u = -mu, so
                // -Delta_p(f(u)) = |f'|^{p-2} ( f' * mu - (p-1) f'' |u'|^p ).
                return pow_abs(fp, pp.p - 2.0) *
                       (fp * mu.value(r) - (pp.p - 1.0) * fpp * std::pow(std::abs(du), pp.p));
            },
            {},
            {}};
}

// Relative p-harmonic residual of a profile at radius r, scaled by the size of
// the two terms of the radial operator.
inline double p_harmonic_residual(const GreenProfile& G, const ProblemParams& params, double r) {
    const double du = G.derivative(r);
    const double d2u = G.second_derivative(r);
    const double t1 = (params.p - 1.0) * d2u;
    const double t2 = (params.n - 1.0) / r * du;
    const double scale = std::abs(t1) + std::abs(t2);
    const double res = t1 + t2 + (params.lebesgue() ? 0.0 : du * params.sigma_log_derivative(r));
    return scale > 0.0 ? std::abs(res) / scale : std::abs(res);
}

// Custom profile constructor with residual validation at load time.
inline GreenProfile validated_custom(std::function<double(double)> value,
                                     std::function<double(double)> derivative,
                                     std::function<double(double)> second,
                                     const RadialDomain& dom, const Classification& cls,
                                     ExtReal inner_limit, ExtReal outer_limit,
                                     const ProblemParams& params, double tol = 1e-8) {
    auto G = GreenProfile::custom(std::move(value), std::move(derivative), std::move(second), dom,
                                  cls, inner_limit, outer_limit);
    const auto [lo, hi] = dom.sample_range();
    for (int i = 0; i <= 100; ++i) {
        const double r = lo * std::pow(hi / lo, i / 100.0);
        if (G.value(r) <= 0.0)
            throw PreconditionError(ErrorCode::InvalidProfile, "profile must be positive");
        if (p_harmonic_residual(G, params, r) > tol)
            throw PreconditionError(ErrorCode::InvalidProfile,
                                    "profile fails the p-harmonic residual check");
    }
    return G;
}

// Flux of |grad G|^{p-1} through the level sphere {G = t}:
//   omega_{n-1} r_t^{n-1} sigma(r_t) |G'(r_t)|^{p-1}.
inline double flux(const GreenProfile& G, double t, const ProblemParams& params) {
    const ExtReal in = G.limit_inner(), out = G.limit_outer();
    const double lo = std::min(in.is_infinite() ? std::numeric_limits<double>::infinity()
                                                : in.value(),
                               out.is_infinite() ? std::numeric_limits<double>::infinity()
                                                 : out.value());
    const double hi = std::max(in.as_double(), out.as_double());
    if (!(t > lo) || !(t < hi))
        throw PreconditionError(ErrorCode::LevelOutOfRange,
                                "flux: level must lie strictly between the end limits");
    const double r_t = G.inverse(t);
    if (!(r_t > 0.0) || !std::isfinite(r_t))
        throw PreconditionError(ErrorCode::LevelOutOfRange,
                                "flux: level set radius is not representable");
    const double dG = G.derivative(r_t);
    if (dG == 0.0)
        throw PreconditionError(ErrorCode::LevelOutOfRange, "flux: degenerate level set");
    return params.measure(r_t) * std::pow(std::abs(dG), params.p - 1.0);
}

// A scalar integrand with explicit compact support [lo, hi].
struct SupportedScalar {
    std::function<double(double)> f;
    double lo;
    double hi;
};

struct CoareaReport {
    double lhs;      // int f(v) |grad v|^p d nu
    double rhs;      // c * int f(tau) dtau / tau
    double lhs2;     // int g(G) |grad G|^p d nu with g(t) = f(t^{(p-1)/p})
    double rhs2;     // c~ * int g(t) dt
    double c;        // ((p-1)/p)^{p-1} * c~
    double c_tilde;  // flux constant
};

// Evaluates both coarea identities for a p-harmonic profile G and an integrand
// f(v) with compact support in the v-levels.
inline CoareaReport coarea_reduce(const SupportedScalar& f, const GreenProfile& G,
                                  const ProblemParams& params, const QuadOptions& opt = {}) {
    const double p = params.p;
    const double q = (p - 1.0) / p;
    const ExtReal in = G.limit_inner(), out = G.limit_outer();
    const double g_min = std::min(in.as_double(), out.as_double());
    const double g_max = std::max(in.as_double(), out.as_double());
    const double v_min = std::pow(g_min, q);
    const double v_max = std::isinf(g_max) ? std::numeric_limits<double>::infinity()
                                           : std::pow(g_max, q);
    if (!(f.lo < f.hi) || !(f.lo > v_min) || !(f.hi < v_max))
        throw PreconditionError(ErrorCode::SupportNotCompact,
                                "coarea_reduce: support of f must be compact in the open "
                                "range of v");

    // The flux is constant along levels; evaluate it at the support's center.
    const double t_mid = std::pow(std::sqrt(f.lo * f.hi), 1.0 / q);
    const double c_tilde = flux(G, t_mid, params);
    const double c = std::pow(q, p - 1.0) * c_tilde;

    // Radial side. v = G^{(p-1)/p}; |grad v|^p = q^p G^{-1} |grad G|^p.
    const double t_lo_level = std::pow(f.lo, 1.0 / q);
    const double t_hi_level = std::pow(f.hi, 1.0 / q);
    const double ra = G.inverse(t_lo_level);
    const double rb = G.inverse(t_hi_level);
    const double r_lo = std::min(ra, rb), r_hi = std::max(ra, rb);
    auto lhs_f = [&](double r) {
        const double g = G.value(r);
        const double v = std::pow(g, q);
        const double gv = q * std::pow(g, q - 1.0) * G.derivative(r);
        return f.f(v) * std::pow(std::abs(gv), p) * params.measure(r);
    };
    const double lhs = integrate_log(lhs_f, r_lo, r_hi, opt);
    const double rhs = c * integrate_log([&](double tau) { return f.f(tau) / tau; }, f.lo, f.hi,
                                         opt);

    auto lhs2_f = [&](double r) {
        const double g = G.value(r);
        return f.f(std::pow(g, q)) * std::pow(std::abs(G.derivative(r)), p) * params.measure(r);
    };
    const double lhs2 = integrate_log(lhs2_f, r_lo, r_hi, opt);
    const double rhs2 =
        c_tilde * integrate_log([&](double t) { return f.f(std::pow(t, q)); }, t_lo_level,
                                t_hi_level, opt);
    return {lhs, rhs, lhs2, rhs2, c, c_tilde};
}

}  // namespace hardyopt
