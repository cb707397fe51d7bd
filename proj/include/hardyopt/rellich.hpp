#pragma once

// Second-order (Rellich-type) inequalities for the linear operator P = -Delta
// in the radial setting:
//
//   Davies-Hinz:  int v^p / |Dv|^{p-1} |Dphi|^p d nu
//                   >= [(p-1) d + 1]^p / p^{2p} int |Dv| |phi|^p d nu
//     for 0 < v with -Dv > 0 and -D(v^d) >= 0, d > 1 (D = Laplacian).
//
//   With v = v0^a, d = 1/a, and W = (1/4) |grad log v0|^2 this becomes
//     int |Dphi|^p / W^{p-1} v0^a  >= 4^p (1-a)^p (p-1+a)^p / p^{2p}
//                                     * int |phi|^p W v0^a,
//   and the ground-state transform multiplies both weights by v1^{2-p} with
//   W = (1/4)|grad log(v0/v1)|^2. At p = 2 the constant is (1-a^2)^2.
//
// The checker evaluates min over a family of analytic C^2 bumps of
//   int lhs_weight |Delta phi|^p d nu / int rhs_weight |phi|^p d nu
// and compares it with the constant. Bumps are powers times Gaussians in
// log r, with closed-form Laplacians; discrete second differences against
// r^{-p}-type weights would be noise-dominated.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hardyopt/calculus.hpp"
#include "hardyopt/common.hpp"
#include "hardyopt/parallel.hpp"
#include "hardyopt/quadrature.hpp"

namespace hardyopt {

struct RellichTriple {
    std::function<double(double)> lhs_weight;  // multiplies |Delta phi|^p
    std::function<double(double)> rhs_weight;  // multiplies |phi|^p
    double constant = 0.0;
};

inline double davies_hinz_constant(double p, double delta) {
    return std::pow((p - 1.0) * delta + 1.0, p) / std::pow(p, 2.0 * p);
}

inline double rellich_constant(double p, double alpha) {
    return std::pow(4.0, p) * std::pow(1.0 - alpha, p) * std::pow(p - 1.0 + alpha, p) /
           std::pow(p, 2.0 * p);
}

// Radial Laplacian v'' + ((n-1)/r) v'.
inline double laplacian_radial_at(const RadialFunction& v, int n, double r) {
    return v.second_derivative(r) + (n - 1.0) / r * v.derivative(r);
}

namespace detail {

inline void check_superharmonic(const RadialFunction& v, int n, double r_lo, double r_hi,
                                bool strict, const char* what) {
    for (int i = 0; i <= 400; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, i / 400.0);
        const double lap = laplacian_radial_at(v, n, r);
        const double scale = std::abs(v.second_derivative(r)) +
                             std::abs((n - 1.0) / r * v.derivative(r));
        const double tol = 1e-12 * std::max(scale, 1e-300);
        const bool ok = strict ? (-lap > 0.0) : (-lap >= -tol);
        if (!ok)
            throw PreconditionError(
                ErrorCode::SuperharmonicityFails,
                std::string(what) + " fails at r = " + std::to_string(r));
    }
}

}  // namespace detail

// Davies-Hinz weights from a superharmonic v with -Delta(v^delta) >= 0.
inline RellichTriple davies_hinz_weights(const RadialFunction& v, double delta,
                                         const ProblemParams& params, double r_lo, double r_hi) {
    if (!(delta > 1.0))
        throw PreconditionError(ErrorCode::AlphaOutOfRange, "requires delta > 1");
    detail::check_superharmonic(v, params.n, r_lo, r_hi, true, "-Delta v > 0");
    RadialFunction vd{
        [v, delta](double r) { return std::pow(v.value(r), delta); },
        [v, delta](double r) {
            return delta * std::pow(v.value(r), delta - 1.0) * v.derivative(r);
        },
        [v, delta](double r) {
            const double val = v.value(r), dv = v.derivative(r);
            return delta * (delta - 1.0) * std::pow(val, delta - 2.0) * dv * dv +
                   delta * std::pow(val, delta - 1.0) * v.second_derivative(r);
        }};
    detail::check_superharmonic(vd, params.n, r_lo, r_hi, false, "-Delta(v^delta) >= 0");
    const double p = params.p;
    const int n = params.n;
    return {[v, n, p](double r) {
                const double lap = std::abs(laplacian_radial_at(v, n, r));
                return std::pow(v.value(r), p) / std::pow(lap, p - 1.0);
            },
            [v, n](double r) { return std::abs(laplacian_radial_at(v, n, r)); },
            davies_hinz_constant(p, delta)};
}

// Weights of the v0^alpha construction, W = (1/4)|grad log v0|^2.
inline RellichTriple rellich_weights(const RadialFunction& v0, double alpha,
                                     const ProblemParams& params, double r_lo, double r_hi) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw PreconditionError(ErrorCode::AlphaOutOfRange, "requires alpha in (0, 1)");
    detail::check_superharmonic(v0, params.n, r_lo, r_hi, false, "-Delta v0 >= 0");
    const double p = params.p;
    auto W = [v0](double r) {
        const double l = v0.derivative(r) / v0.value(r);
        return 0.25 * l * l;
    };
    return {[v0, W, p, alpha](double r) {
                return std::pow(v0.value(r), alpha) / std::pow(W(r), p - 1.0);
            },
            [v0, W, alpha](double r) { return W(r) * std::pow(v0.value(r), alpha); },
            rellich_constant(p, alpha)};
}

// Ground-state transformed weights, W = (1/4)|grad log(v0/v1)|^2 and an extra
// v1^{2-p} factor on both sides.
inline RellichTriple rellich_gst_weights(const RadialFunction& v0, const RadialFunction& v1,
                                         double alpha, const ProblemParams& params, double r_lo,
                                         double r_hi) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw PreconditionError(ErrorCode::AlphaOutOfRange, "requires alpha in (0, 1)");
    // Both inputs solve -Delta u = 0 (sampled residual, relative scale).
    for (const auto* u : {&v0, &v1}) {
        for (int i = 0; i <= 200; ++i) {
            const double r = r_lo * std::pow(r_hi / r_lo, i / 200.0);
            const double lap = laplacian_radial_at(*u, params.n, r);
            const double scale = std::abs(u->second_derivative(r)) +
                                 std::abs((params.n - 1.0) / r * u->derivative(r)) +
                                 std::abs(u->value(r)) / (r * r);
            if (std::abs(lap) > 1e-8 * std::max(scale, 1e-300))
                throw PreconditionError(ErrorCode::SuperharmonicityFails,
                                        "input is not harmonic at r = " + std::to_string(r));
        }
    }
    const double p = params.p;
    auto W = [v0, v1](double r) {
        const double l = v0.derivative(r) / v0.value(r) - v1.derivative(r) / v1.value(r);
        return 0.25 * l * l;
    };
    auto ratio_pow = [v0, v1, alpha](double r) {
        return std::pow(v0.value(r) / v1.value(r), alpha);
    };
    return {[W, ratio_pow, v1, p](double r) {
                return ratio_pow(r) * std::pow(v1.value(r), 2.0 - p) / std::pow(W(r), p - 1.0);
            },
            [W, ratio_pow, v1, p](double r) {
                return W(r) * ratio_pow(r) * std::pow(v1.value(r), 2.0 - p);
            },
            rellich_constant(p, alpha)};
}

// Analytic C^2 bump phi = exp(b t - (t - t0)^2 / (2 s^2)), t = log r, with
// closed-form radial Laplacian.
struct LogGaussianBump {
    double b = 0.0;
    double t0 = 0.0;
    double s = 1.0;

    double g(double t) const { return b * t - (t - t0) * (t - t0) / (2.0 * s * s); }
    double dg(double t) const { return b - (t - t0) / (s * s); }
    double value(double r) const { return std::exp(g(std::log(r))); }
    double laplacian(int n, double r) const {
        const double t = std::log(r);
        const double d = dg(t);
        return value(r) * (d * d - 1.0 / (s * s) + (n - 2.0) * d) / (r * r);
    }
    // Radius range outside which phi^p is below ~1e-90.
    std::pair<double, double> support(double p) const {
        const double half = s * std::sqrt(2.0 * 208.0 / p) + 6.0 * s + std::abs(b) * s * s;
        return {std::exp(t0 - half), std::exp(t0 + half)};
    }
};

inline std::vector<LogGaussianBump> random_bump_family(std::size_t count, std::uint64_t seed,
                                                       double t0_lo, double t0_hi) {
    std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
    std::uniform_real_distribution<double> ub(-2.0, 2.0), ut(t0_lo, t0_hi), us(0.3, 2.0);
    std::vector<LogGaussianBump> fam(count);
    for (auto& f : fam) f = {ub(rng), ut(rng), us(rng)};
    return fam;
}

struct RellichCheckResult {
    double min_ratio = std::numeric_limits<double>::infinity();
    std::size_t argmin = 0;
    std::vector<double> ratios;
};

// min over the family of int lhs |Delta phi|^p d nu / int rhs |phi|^p d nu.
inline RellichCheckResult rellich_check(const RellichTriple& triple,
                                        const std::vector<LogGaussianBump>& family,
                                        const ProblemParams& params,
                                        const QuadOptions& opt = {}) {
    RellichCheckResult out;
    out.ratios.assign(family.size(), 0.0);
    const double p = params.p;
    const int n = params.n;
    parallel_for(family.size(), [&](std::size_t i) {
        const auto& f = family[i];
        auto [r_lo, r_hi] = f.support(p);
        const double num = integrate_log(
            [&](double r) {
                return triple.lhs_weight(r) * std::pow(std::abs(f.laplacian(n, r)), p) *
                       params.measure(r);
            },
            r_lo, r_hi, opt);
        const double den = integrate_log(
            [&](double r) {
                return triple.rhs_weight(r) * std::pow(f.value(r), p) * params.measure(r);
            },
            r_lo, r_hi, opt);
        out.ratios[i] = num / den;
    });
    for (std::size_t i = 0; i < out.ratios.size(); ++i) {
        if (out.ratios[i] < out.min_ratio) {
            out.min_ratio = out.ratios[i];
            out.argmin = i;
        }
    }
    return out;
}

}  // namespace hardyopt
