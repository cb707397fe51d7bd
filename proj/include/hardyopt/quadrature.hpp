#pragma once

// Adaptive composite Gauss-Legendre (15-point) quadrature in the variable
// s = log r. Radial integrands on (0, infinity) are near-polynomial in log r,
// so panels are compared against their two halves and split until the local
// error is below tolerance. Isolated non-finite evaluations (integrable point
// singularities such as |gamma - 2G|^{p-2} with p < 2) are resolved by
// splitting; a sliver that still evaluates non-finite at negligible width
// contributes zero.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hardyopt/common.hpp"

namespace hardyopt {

// 15-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<double, 15> kGL15Nodes = {
    -0.98799251802048543, -0.93727339240070590, -0.84820658341042722,
    -0.72441773136017005, -0.57097217260853885, -0.39415134707756337,
    -0.20119409399743452, 0.0,                  0.20119409399743452,
    0.39415134707756337,  0.57097217260853885,  0.72441773136017005,
    0.84820658341042722,  0.93727339240070590,  0.98799251802048543};

inline constexpr std::array<double, 15> kGL15Weights = {
    0.030753241996117268, 0.070366047488108125, 0.10715922046717194,
    0.13957067792615431,  0.16626920581699393,  0.18616100001556221,
    0.19843148532711158,  0.20257824192556127,  0.19843148532711158,
    0.18616100001556221,  0.16626920581699393,  0.13957067792615431,
    0.10715922046717194,  0.070366047488108125, 0.030753241996117268};

// 7-point Gauss-Legendre rule on [-1, 1] (per-interval caches on fine grids).
inline constexpr std::array<double, 7> kGL7Nodes = {
    -0.94910791234275852, -0.74153118559939444, -0.40584515137739717, 0.0,
    0.40584515137739717,  0.74153118559939444,  0.94910791234275852};

inline constexpr std::array<double, 7> kGL7Weights = {
    0.12948496616886969, 0.27970539148927667, 0.38183005050511894, 0.41795918367346939,
    0.38183005050511894, 0.27970539148927667, 0.12948496616886969};

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 52;
};

namespace detail {

// One GL15 panel of g over [a, b]; finite == false if any node is non-finite.
// l1 carries the absolute-value sum, the scale for the evaluation-noise floor.
struct PanelResult {
    double value;
    double l1;
    bool finite;
};

template <class G>
PanelResult gl15_panel(G&& g, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0, l1 = 0.0;
    for (std::size_t k = 0; k < kGL15Nodes.size(); ++k) {
        const double v = g(mid + half * kGL15Nodes[k]);
        if (!std::isfinite(v)) return {0.0, 0.0, false};
        sum += kGL15Weights[k] * v;
        l1 += kGL15Weights[k] * std::abs(v);
    }
    return {sum * half, l1 * half, true};
}

template <class G>
double adapt_panel(G&& g, double a, double b, const PanelResult& whole, const QuadOptions& opt,
                   int depth) {
    const double width = b - a;
    if (depth >= opt.max_depth || width <= 1e-15 * (1.0 + std::abs(a) + std::abs(b))) {
        if (!whole.finite) {
            // Integrable point singularity squeezed to negligible width.
            if (width <= 1e-12 * (1.0 + std::abs(a) + std::abs(b))) return 0.0;
            throw PreconditionError(ErrorCode::NonFiniteIntegrand,
                                    "quadrature: integrand not finite on a panel that "
                                    "cannot be refined further");
        }
        return whole.value;
    }
    const double mid = 0.5 * (a + b);
    auto left = gl15_panel(g, a, mid);
    auto right = gl15_panel(g, mid, b);
    if (whole.finite && left.finite && right.finite) {
        const double refined = left.value + right.value;
        const double err = std::abs(refined - whole.value);
        // The last term is the evaluation-noise floor: refinement below the
        // rounding jitter of the integrand itself cannot converge.
        if (err <= opt.abs_tol || err <= opt.rel_tol * std::abs(refined) ||
            err <= 1e-13 * (left.l1 + right.l1))
            return refined;
    }
    return adapt_panel(g, a, mid, left, opt, depth + 1) +
           adapt_panel(g, mid, b, right, opt, depth + 1);
}

template <class G>
double integrate_segment(G&& g, double a, double b, const QuadOptions& opt) {
    if (!(b > a)) return 0.0;
    // Long segments start from a composite baseline so the error estimate is honest.
    const int pieces = std::max(1, static_cast<int>((b - a) / 0.5));
    double total = 0.0;
    const double h = (b - a) / pieces;
    for (int i = 0; i < pieces; ++i) {
        const double x0 = a + i * h;
        const double x1 = (i + 1 == pieces) ? b : x0 + h;
        total += adapt_panel(g, x0, x1, gl15_panel(g, x0, x1), opt, 0);
    }
    return total;
}

}  // namespace detail

// Integral of f(r) dr over [r_lo, r_hi], 0 < r_lo < r_hi, computed in s = log r.
template <class F>
double integrate_log(F&& f, double r_lo, double r_hi, const QuadOptions& opt = {}) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo)) return 0.0;
    auto g = [&](double s) {
        const double r = std::exp(s);
        return f(r) * r;  // dr = r ds
    };
    return detail::integrate_segment(g, std::log(r_lo), std::log(r_hi), opt);
}

// Same, splitting at interior breakpoints (kinks or known singular radii).
template <class F>
double integrate_log(F&& f, double r_lo, double r_hi, std::span<const double> breakpoints,
                     const QuadOptions& opt = {}) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo)) return 0.0;
    std::vector<double> cuts;
    cuts.push_back(r_lo);
    for (double b : breakpoints)
        if (b > r_lo * (1.0 + 1e-14) && b < r_hi * (1.0 - 1e-14)) cuts.push_back(b);
    cuts.push_back(r_hi);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += integrate_log(f, cuts[i], cuts[i + 1], opt);
    return total;
}

// Integral of f(x) dx over [a, b] on a linear scale (used for level-variable
// integrals where the range may include 0 only as an endpoint limit).
template <class F>
double integrate_linear(F&& f, double a, double b, const QuadOptions& opt = {}) {
    if (!(b > a)) return 0.0;
    return detail::integrate_segment(f, a, b, opt);
}

}  // namespace hardyopt
