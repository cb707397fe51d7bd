#pragma once

// Numerical verification of the three optimality properties of a Hardy
// weight: best constant (window-restricted Rayleigh quotients), criticality
// (explicit null sequences built from logarithmic cutoffs of the ground
// state), and null-criticality (divergent gradient mass over level bands).
// Also the 1D impossibility probe for
//   int_0^1 |phi|^p dt/t <= C int_0^1 (t |phi'|)^p dt/t.
//
// The Rayleigh quotient R(phi) = Q(phi) / int W |phi|^p d nu is minimized
// over nodal values supported in a window [r_lo, r_hi] by multi-start
// projected gradient descent on the manifold int W |phi|^p d nu = 1, seeded
// with products of the ground state and logarithmic cutoffs (the asymptotic
// minimizer family) plus random positive starts. The descent direction is
// preconditioned by the tridiagonal second-order model of the gradient term
// (a Thomas solve per step); at p = 2 a unit step is inverse power iteration.
// The discrete minimum is an upper bound for the continuous
// window-restricted best constant.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "hardyopt/common.hpp"
#include "hardyopt/energy.hpp"
#include "hardyopt/parallel.hpp"
#include "hardyopt/quadrature.hpp"
#include "hardyopt/weights.hpp"

namespace hardyopt {

struct VerificationWindow {
    enum class Tag { Global, NearInner, NearOuter };
    double r_lo = 0.0;
    double r_hi = 0.0;
    Tag tag = Tag::Global;

    static VerificationWindow global(double lo, double hi) { return {lo, hi, Tag::Global}; }
    static VerificationWindow near_inner(double lo, double hi) {
        return {lo, hi, Tag::NearInner};
    }
    static VerificationWindow near_outer(double lo, double hi) {
        return {lo, hi, Tag::NearOuter};
    }
    std::string tag_name() const {
        switch (tag) {
            case Tag::Global: return "global";
            case Tag::NearInner: return "near_inner";
            case Tag::NearOuter: return "near_outer";
        }
        return "?";
    }
};

struct MinimizeOptions {
    std::uint64_t seed = 0;
    int n_starts = 5;           // bump + 2 log-cutoff seeds + 2 random positive
    double rel_tol = 1e-8;      // relative change of the quotient ...
    int patience = 10;          // ... over this many iterations
    int max_iterations = 100000;
    // Random starts probe for lower basins on a reduced budget; a random
    // start that wins gets polished with the full budget afterwards.
    int exploratory_iterations = 2000;
    QuadOptions quad;
};

struct RayleighResult {
    double lambda_hat = 0.0;
    TestFunction minimizer;
    int iterations = 0;
    int best_start = -1;
};

namespace detail {

// Per-interval quadrature cache: phi(r_q) = (1-theta) x_i + theta x_{i+1}.
struct QuadCache {
    std::vector<std::size_t> interval;  // interval index per point
    std::vector<double> theta;
    std::vector<double> cw;  // quadrature weight * W(r) * measure(r)
};

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 mix so that nearby (seed, stream) pairs decorrelate
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return std::mt19937_64(z ^ (z >> 31));
}

// |x|^p for the exponents the hot loops see most.
inline double pow_p(double x, double p) {
    const double a = std::abs(x);
    if (p == 2.0) return a * a;
    if (p == 3.0) return a * a * a;
    if (p == 4.0) return (a * a) * (a * a);
    return std::pow(a, p);
}

// Solves the SPD tridiagonal system (dl, d, du) x = b in place of b.
inline void thomas_solve(std::vector<double>& sub, std::vector<double>& diag,
                         std::vector<double>& sup, std::vector<double>& b) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        b[i] -= w * b[i - 1];
    }
    b[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) b[i] = (b[i] - sup[i] * b[i + 1]) / diag[i];
}

}  // namespace detail

// Minimize Q_V(phi) / int W |phi|^p d nu over nodal functions supported in
// the window. V may be null (the Hardy case Q(phi) = int |grad phi|^p).
inline RayleighResult rayleigh_min(const Weight& W, const PotentialProfile* V,
                                   const RadialGrid& grid, const VerificationWindow& window,
                                   const GroundState* seed_profile = nullptr,
                                   const MinimizeOptions& opt = {}) {
    const auto& r = grid.nodes();
    const std::size_t N = grid.size();
    const double p = grid.params().p;

    // Free node indices: strictly inside the window and the grid.
    std::size_t first = 1;
    while (first < N - 1 && r[first] < window.r_lo) ++first;
    std::size_t last = N - 1;  // exclusive
    while (last > first && r[last - 1] > window.r_hi) --last;
    if (last <= first)
        throw PreconditionError(ErrorCode::GridTooNarrow, "window contains no grid nodes");
    const std::size_t dim = last - first;

    // Quadrature cache for the denominator over the window's intervals.
    detail::QuadCache cache;
    std::vector<double> grad_mass(N - 1, 0.0);  // int d nu per interval
    std::vector<double> pot_cw;                 // V-term cache (shares points with cache)
    const std::size_t i_lo = first - 1;
    const std::size_t i_hi = last;  // intervals [i_lo, i_hi)
    for (std::size_t i = i_lo; i < i_hi && i < N - 1; ++i) {
        grad_mass[i] = grid.interval_mass(i);
        const double a = std::log(r[i]), b = std::log(r[i + 1]);
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t k = 0; k < kGL7Nodes.size(); ++k) {
            const double s = mid + half * kGL7Nodes[k];
            const double rr = std::exp(s);
            const double dw = kGL7Weights[k] * half * rr;  // dr = r ds
            const double wv = W(rr);
            if (!std::isfinite(wv))
                throw PreconditionError(ErrorCode::NonFiniteIntegrand,
                                        "weight not finite at a quadrature point");
            cache.interval.push_back(i);
            cache.theta.push_back((rr - r[i]) / (r[i + 1] - r[i]));
            cache.cw.push_back(dw * wv * grid.measure(rr));
            if (V) pot_cw.push_back(dw * V->value(rr) * grid.measure(rr));
        }
    }

    auto node_value = [&](const std::vector<double>& x, std::size_t i) {
        return (i >= first && i < last) ? x[i - first] : 0.0;
    };
    auto denom = [&](const std::vector<double>& x) {
        double d = 0.0;
        for (std::size_t q = 0; q < cache.cw.size(); ++q) {
            const std::size_t i = cache.interval[q];
            const double phi = (1.0 - cache.theta[q]) * node_value(x, i) +
                               cache.theta[q] * node_value(x, i + 1);
            d += cache.cw[q] * detail::pow_p(phi, p);
        }
        return d;
    };
    auto numer = [&](const std::vector<double>& x) {
        double qsum = 0.0;
        for (std::size_t i = i_lo; i < i_hi && i < N - 1; ++i) {
            const double s = (node_value(x, i + 1) - node_value(x, i)) / (r[i + 1] - r[i]);
            qsum += detail::pow_p(s, p) * grad_mass[i];
        }
        if (V) {
            for (std::size_t q = 0; q < pot_cw.size(); ++q) {
                const std::size_t i = cache.interval[q];
                const double phi = (1.0 - cache.theta[q]) * node_value(x, i) +
                                   cache.theta[q] * node_value(x, i + 1);
                qsum += pot_cw[q] * detail::pow_p(phi, p);
            }
        }
        return qsum;
    };
    // Frozen-pencil matrices: with A(x) from the gradient term and B(x) from
    // the weighted mass, grad Q = p A x and grad D = p B x, and Hess Q =
    // p(p-1) A, Hess D = p(p-1) B wherever slopes and values are nonzero. A
    // stationary point of the quotient is the ground eigenvector of its own
    // frozen pencil (A(x), B(x)); both matrices are tridiagonal.
    struct Tridiag {
        std::vector<double> sub, diag, sup;
    };
    auto build_A = [&](const std::vector<double>& x, Tridiag& A) {
        A.sub.assign(dim, 0.0);
        A.diag.assign(dim, 0.0);
        A.sup.assign(dim, 0.0);
        for (std::size_t i = i_lo; i < i_hi && i < N - 1; ++i) {
            const double h = r[i + 1] - r[i];
            // Zero-slope plateaus (p > 2) stay invertible through a floor
            // relative to the local function scale, so that the measure's
            // dynamic range on wide windows cannot pollute distant rows.
            const double local = (std::abs(node_value(x, i)) + std::abs(node_value(x, i + 1)) +
                                  1e-300) /
                                 h;
            const double sl = std::max(
                std::abs((node_value(x, i + 1) - node_value(x, i)) / h), 1e-10 * local);
            const double c = detail::pow_p(sl, p - 2.0) * grad_mass[i] / (h * h);
            if (i >= first && i < last) A.diag[i - first] += c;
            if (i + 1 >= first && i + 1 < last) A.diag[i + 1 - first] += c;
            if (i >= first && i + 1 < last) {
                A.sub[i + 1 - first] -= c;
                A.sup[i - first] -= c;
            }
        }
        if (V) {
            // The potential term of the numerator has the same interpolation
            // structure as the denominator.
            for (std::size_t q = 0; q < pot_cw.size(); ++q) {
                const std::size_t i = cache.interval[q];
                const double th = cache.theta[q];
                const double phi = (1.0 - th) * node_value(x, i) + th * node_value(x, i + 1);
                const double c = pot_cw[q] * detail::pow_p(phi, p - 2.0);
                if (i >= first && i < last) A.diag[i - first] += c * (1.0 - th) * (1.0 - th);
                if (i + 1 >= first && i + 1 < last) A.diag[i + 1 - first] += c * th * th;
                if (i >= first && i + 1 < last) {
                    A.sub[i + 1 - first] += c * th * (1.0 - th);
                    A.sup[i - first] += c * th * (1.0 - th);
                }
            }
        }
    };
    auto build_B = [&](const std::vector<double>& x, Tridiag& B) {
        B.sub.assign(dim, 0.0);
        B.diag.assign(dim, 0.0);
        B.sup.assign(dim, 0.0);
        for (std::size_t q = 0; q < cache.cw.size(); ++q) {
            const std::size_t i = cache.interval[q];
            const double th = cache.theta[q];
            const double phi = (1.0 - th) * node_value(x, i) + th * node_value(x, i + 1);
            const double c = cache.cw[q] * detail::pow_p(phi, p - 2.0);
            if (i >= first && i < last) B.diag[i - first] += c * (1.0 - th) * (1.0 - th);
            if (i + 1 >= first && i + 1 < last) B.diag[i + 1 - first] += c * th * th;
            if (i >= first && i + 1 < last) {
                B.sub[i + 1 - first] += c * th * (1.0 - th);
                B.sup[i - first] += c * th * (1.0 - th);
            }
        }
    };
    // Matrix entries span the measure's full dynamic range on wide windows,
    // so factorizations use a symmetric diagonal scaling (a congruence, which
    // preserves inertia for the Sturm count).
    auto row_scale = [&](const Tridiag& A, const Tridiag& B, double sigma,
                         std::vector<double>& s) {
        s.resize(dim);
        for (std::size_t j = 0; j < dim; ++j)
            s[j] = 1.0 / std::sqrt(std::abs(A.diag[j]) + std::abs(sigma) * std::abs(B.diag[j]) +
                                   1e-300);
    };
    // Count of pencil eigenvalues below sigma (negative pivots of the LDL
    // factorization of S (A - sigma B) S).
    auto sturm_count = [&](const Tridiag& A, const Tridiag& B, double sigma) -> int {
        std::vector<double> s;
        row_scale(A, B, sigma, s);
        int negs = 0;
        double prev = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            const double dj = (A.diag[j] - sigma * B.diag[j]) * s[j] * s[j];
            const double lj = j > 0 ? (A.sub[j] - sigma * B.sub[j]) * s[j] * s[j - 1] : 0.0;
            double piv = dj;
            if (j > 0) piv -= lj * lj / prev;
            if (piv == 0.0) piv = -1e-300;
            if (piv < 0.0) ++negs;
            prev = piv;
        }
        return negs;
    };
    auto solve_shifted = [&](const Tridiag& A, const Tridiag& B, double sigma,
                             std::vector<double> rhs) -> std::vector<double> {
        std::vector<double> s;
        row_scale(A, B, sigma, s);
        std::vector<double> sub(dim), diag(dim), sup(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            diag[j] = (A.diag[j] - sigma * B.diag[j]) * s[j] * s[j];
            sub[j] = j > 0 ? (A.sub[j] - sigma * B.sub[j]) * s[j] * s[j - 1] : 0.0;
            sup[j] = j + 1 < dim ? (A.sup[j] - sigma * B.sup[j]) * s[j] * s[j + 1] : 0.0;
            rhs[j] *= s[j];
        }
        detail::thomas_solve(sub, diag, sup, rhs);
        for (std::size_t j = 0; j < dim; ++j) rhs[j] *= s[j];
        return rhs;
    };
    auto apply_tridiag = [&](const Tridiag& B, const std::vector<double>& x) {
        std::vector<double> y(dim, 0.0);
        for (std::size_t j = 0; j < dim; ++j) {
            y[j] = B.diag[j] * x[j];
            if (j > 0) y[j] += B.sub[j] * x[j - 1];
            if (j + 1 < dim) y[j] += B.sup[j] * x[j + 1];
        }
        return y;
    };

    // Seeds. Log-cutoff seeds follow the null-sequence family: the ground
    // state (when supplied) times a plateau with log-linear ramps. For p != 2
    // the quotient is nonconvex and its minimizer asymmetric, so the two ramp
    // widths differ per start. Remaining starts are random positive bumps.
    const double s_lo = std::log(window.r_lo), s_hi = std::log(window.r_hi);
    auto make_cutoff_seed = [&](double left_frac, double right_frac) {
        std::vector<double> x(dim, 0.0);
        for (std::size_t j = 0; j < dim; ++j) {
            const double s = std::log(r[first + j]);
            const double t = (s - s_lo) / (s_hi - s_lo);
            double w = 1.0;
            if (t < left_frac) w = t / left_frac;
            if (t > 1.0 - right_frac) w = std::min(w, (1.0 - t) / right_frac);
            w = std::max(0.0, w);
            const double base = seed_profile ? seed_profile->value(r[first + j]) : 1.0;
            x[j] = base * w;
        }
        return x;
    };
    auto make_random_seed = [&](std::uint64_t stream) {
        auto rng = detail::seeded_rng(opt.seed, stream);
        std::uniform_real_distribution<double> u(0.1, 1.0);
        std::vector<double> x(dim, 0.0);
        for (std::size_t j = 0; j < dim; ++j) {
            const double s = std::log(r[first + j]);
            const double t = (s - s_lo) / (s_hi - s_lo);
            x[j] = u(rng) * std::sin(kPi * t);
        }
        return x;
    };

    // A smooth bump seed: at p = 2 the exact minimizer is the ground state
    // times a half-sine in log r, and the p != 2 minimizers stay bump-shaped.
    auto make_bump_seed = [&]() {
        std::vector<double> x(dim, 0.0);
        for (std::size_t j = 0; j < dim; ++j) {
            const double s = std::log(r[first + j]);
            const double t = (s - s_lo) / (s_hi - s_lo);
            const double base = seed_profile ? seed_profile->value(r[first + j]) : 1.0;
            x[j] = base * std::sin(kPi * t);
        }
        return x;
    };

    struct StartResult {
        double lambda = std::numeric_limits<double>::infinity();
        std::vector<double> x;
        int iterations = 0;
        bool converged = false;
    };

    std::vector<std::vector<double>> seeds;
    seeds.push_back(make_bump_seed());
    const double fracs[2][2] = {{0.25, 0.25}, {0.45, 0.45}};
    for (int k = 0; k < 2 && static_cast<int>(seeds.size()) < opt.n_starts; ++k)
        seeds.push_back(make_cutoff_seed(fracs[k][0], fracs[k][1]));
    const std::size_t n_shaped = seeds.size();
    for (int k = static_cast<int>(seeds.size()); k < opt.n_starts; ++k)
        seeds.push_back(make_random_seed(static_cast<std::uint64_t>(k)));
    std::vector<StartResult> results(seeds.size());


    auto run_seed = [&](const std::vector<double>& seed, int budget) -> StartResult {
        std::vector<double> x = seed;
        double d = denom(x);
        if (!(d > 0.0)) return {};  // weight vanishes on this seed's support
        const double inv = std::pow(d, -1.0 / p);
        for (double& xi : x) xi *= inv;
        double lambda = numer(x);  // d == 1 after scaling
        std::vector<double> history;
        history.push_back(lambda);
        Tridiag A, B;
        std::vector<double> xt(dim);
        int it = 0;
        bool converged = false;
        for (; it < budget; ++it) {
            build_A(x, A);
            build_B(x, B);
            // Ground eigenvalue of the frozen pencil by Sturm bisection in
            // (0, lambda]; the current quotient is an upper bound.
            double lo_sig = 0.0, hi_sig = lambda * (1.0 + 1e-12);
            for (int b = 0; b < 80 && hi_sig - lo_sig > 1e-14 * hi_sig; ++b) {
                const double mid = 0.5 * (lo_sig + hi_sig);
                if (sturm_count(A, B, mid) >= 1)
                    hi_sig = mid;
                else
                    lo_sig = mid;
            }
            // Inverse iteration just below the frozen ground eigenvalue.
            const double sigma = lo_sig - 64.0 * (hi_sig - lo_sig) - 1e-300;
            std::vector<double> e = x;
            for (int ii = 0; ii < 3; ++ii) {
                e = solve_shifted(A, B, sigma, apply_tridiag(B, e));
                double norm = 0.0;
                for (double ej : e) norm = std::max(norm, std::abs(ej));
                if (!(norm > 0.0) || !std::isfinite(norm)) {
                    e = x;
                    break;
                }
                for (double& ej : e) ej /= norm;
            }
            // Line search on the blend x + t (e - x), renormalized.
            double best_q = lambda;
            std::vector<double> best_x;
            double t = 1.0;
            for (int bt = 0; bt < 25; ++bt) {
                for (std::size_t j = 0; j < dim; ++j) xt[j] = (1.0 - t) * x[j] + t * e[j];
                const double dt = denom(xt);
                if (dt > 0.0) {
                    const double sc = std::pow(dt, -1.0 / p);
                    for (std::size_t j = 0; j < dim; ++j) xt[j] *= sc;
                    const double qt = numer(xt);
                    if (qt < best_q) {
                        best_q = qt;
                        best_x = xt;
                        break;
                    }
                }
                t *= 0.5;
            }
            if (best_x.empty()) {
                // Fall back to a preconditioned gradient step: d = A^{-1} g
                // with g = p (A x - lambda B x); unit step in this metric is
                // t = p - 1, which recovers nonlinear inverse power iteration.
                std::vector<double> g = apply_tridiag(A, x);
                const std::vector<double> bx = apply_tridiag(B, x);
                for (std::size_t j = 0; j < dim; ++j) g[j] -= lambda * bx[j];
                {
                    std::vector<double> sub = A.sub, diag = A.diag, sup = A.sup;
                    detail::thomas_solve(sub, diag, sup, g);
                }
                double tg = p - 1.0;
                for (int bt = 0; bt < 40; ++bt) {
                    for (std::size_t j = 0; j < dim; ++j) xt[j] = x[j] - tg * g[j];
                    const double dt = denom(xt);
                    if (dt > 0.0) {
                        const double sc = std::pow(dt, -1.0 / p);
                        for (std::size_t j = 0; j < dim; ++j) xt[j] *= sc;
                        const double qt = numer(xt);
                        if (qt < lambda) {
                            best_q = qt;
                            best_x = xt;
                            break;
                        }
                    }
                    tg *= 0.5;
                }
            }
            if (best_x.empty()) {
                converged = true;  // stationary at line-search resolution
                break;
            }
            x.swap(best_x);
            lambda = best_q;
            history.push_back(lambda);
            if (static_cast<int>(history.size()) > opt.patience) {
                const double prev = history[history.size() - 1 - opt.patience];
                if (std::abs(prev - lambda) <= opt.rel_tol * std::max(1.0, std::abs(lambda))) {
                    converged = true;
                    break;
                }
            }
        }
        return {lambda, std::move(x), it, converged};
    };

    parallel_for(seeds.size(), [&](std::size_t si) {
        const int budget =
            si < n_shaped ? opt.max_iterations : opt.exploratory_iterations;
        results[si] = run_seed(seeds[si], budget);
    });

    int best = -1;
    for (std::size_t si = 0; si < results.size(); ++si) {
        if (!std::isfinite(results[si].lambda) || results[si].x.empty()) continue;
        if (best < 0) {
            best = static_cast<int>(si);
            continue;
        }
        const auto& cand = results[si];
        const auto& cur = results[static_cast<std::size_t>(best)];
        if (cand.lambda < cur.lambda - 1e-10) {
            best = static_cast<int>(si);
        } else if (std::abs(cand.lambda - cur.lambda) <= 1e-10) {
            // Tie: prefer the narrower support.
            auto width = [](const std::vector<double>& x) {
                std::size_t a = 0, b = x.size();
                while (a < x.size() && std::abs(x[a]) < 1e-12) ++a;
                while (b > a && std::abs(x[b - 1]) < 1e-12) --b;
                return b - a;
            };
            if (width(cand.x) < width(cur.x)) best = static_cast<int>(si);
        }
    }
    if (best < 0)
        throw PreconditionError(ErrorCode::ZeroDenominator,
                                "weight vanishes on every admissible start in the window");
    if (!results[static_cast<std::size_t>(best)].converged &&
        static_cast<std::size_t>(best) >= n_shaped) {
        // An exploratory start won within its reduced budget; polish it.
        results[static_cast<std::size_t>(best)] =
            run_seed(results[static_cast<std::size_t>(best)].x, opt.max_iterations);
    }
    const auto& win = results[static_cast<std::size_t>(best)];
    if (!win.converged)
        throw ConvergenceError("rayleigh_min: iteration cap reached before the quotient settled");

    std::vector<double> full(N, 0.0);
    for (std::size_t j = 0; j < dim; ++j) full[first + j] = win.x[j];
    RayleighResult res;
    res.lambda_hat = win.lambda;
    res.minimizer = TestFunction(grid, std::move(full));
    res.iterations = win.iterations;
    res.best_start = best;
    return res;
}

// ---------------------------------------------------------------------------
// Null sequences (logarithmic cutoffs of the ground state).

struct NullSequenceRow {
    int index = 0;
    double X = 0.0;
    double Y = 0.0;
    double Qsim = 0.0;
    double localization = 0.0;  // int_B (v w_n)^p d nu
    double normalized_energy = 0.0;
};

namespace detail {

// phi_n in the two-sided case:
//   0 on (0, 1/n^2], log ramp up on [1/n^2, 1/n], 1 on [1/n, n],
//   log ramp down on [n, n^2], 0 on [n^2, inf).
// One-sided: same lower ramp, then 1.
struct LogCutoff {
    double n;
    bool two_sided;
    double value(double t) const {
        const double ln = std::log(n);
        if (t <= 1.0 / (n * n)) return 0.0;
        if (t <= 1.0 / n) return 2.0 + std::log(t) / ln;
        if (!two_sided || t <= n) return 1.0;
        if (t <= n * n) return 2.0 - std::log(t) / ln;
        return 0.0;
    }
    double derivative(double t) const {
        const double ln = std::log(n);
        if (t > 1.0 / (n * n) && t < 1.0 / n) return 1.0 / (t * ln);
        if (two_sided && t > n && t < n * n) return -1.0 / (t * ln);
        return 0.0;
    }
};

}  // namespace detail

// Builds w_n = phi_n(v) and evaluates X_n, Y_n, Qsim_n and the localization
// mass over B = {1 < v < 2} (two-sided) or B = {1/4 < v < 3/4} (one-sided).
// The integrals are evaluated analytically (adaptive quadrature with
// breakpoints at the cutoff kinks), not on the nodal grid.
inline NullSequenceRow null_sequence(const GroundState& v, int n, const RadialGrid& grid,
                                     const QuadOptions& opt = {}) {
    if (n < 3) throw PreconditionError(ErrorCode::GridTooNarrow, "requires n >= 3");
    const double p = grid.params().p;
    const bool two_sided = v.has_unbounded_end();
    const double nn = static_cast<double>(n);
    detail::LogCutoff phi{nn, two_sided};

    const double lo_level = 1.0 / (nn * nn);
    const double hi_level = two_sided ? nn * nn : v.sup_value() * 2.0;
    if (!two_sided && !(lo_level < v.sup_value()))
        throw PreconditionError(ErrorCode::GridTooNarrow,
                                "cutoff levels exceed the range of the ground state");
    LevelSet support = v.level_set(lo_level, hi_level);
    if (support.empty())
        throw PreconditionError(ErrorCode::GridTooNarrow,
                                "cutoff levels missing from the ground state range");

    // Kink radii of w_n: boundaries of the level bands at 1/n and (n, if two-sided).
    std::vector<double> kinks;
    auto add_boundaries = [&kinks](const LevelSet& ls) {
        for (auto [a, b] : ls) {
            kinks.push_back(a);
            kinks.push_back(b);
        }
    };
    add_boundaries(v.level_set(1.0 / nn, hi_level));
    if (two_sided) add_boundaries(v.level_set(lo_level, nn));

    NullSequenceRow row;
    row.index = n;
    for (auto [ra, rb] : support) {
        auto X_f = [&](double r) {
            const double vv = v.value(r);
            const double dw = phi.derivative(vv) * v.derivative(r);
            return std::pow(std::abs(vv * dw), p) * grid.measure(r);
        };
        auto Y_f = [&](double r) {
            const double vv = v.value(r);
            return std::pow(std::abs(phi.value(vv) * v.derivative(r)), p) * grid.measure(r);
        };
        auto Qsim_f = [&](double r) {
            const double vv = v.value(r);
            const double dv = std::abs(v.derivative(r));
            const double wv = phi.value(vv);
            const double dw = std::abs(phi.derivative(vv)) * dv;
            if (p <= 2.0)
                return vv * vv * dw * dw * pow_abs(vv * dw + wv * dv, p - 2.0) *
                       grid.measure(r);
            return (std::pow(vv, p) * std::pow(dw, p) +
                    vv * vv * std::pow(dv, p - 2.0) * std::pow(wv, p - 2.0) * dw * dw) *
                   grid.measure(r);
        };
        row.X += integrate_log(X_f, ra, rb, kinks, opt);
        row.Y += integrate_log(Y_f, ra, rb, kinks, opt);
        row.Qsim += integrate_log(Qsim_f, ra, rb, kinks, opt);
    }

    const double B_lo = two_sided ? 1.0 : 0.25;
    const double B_hi = two_sided ? 2.0 : 0.75;
    for (auto [ra, rb] : v.level_set(B_lo, B_hi)) {
        row.localization += integrate_log(
            [&](double r) {
                const double vv = v.value(r);
                return std::pow(vv * phi.value(vv), p) * grid.measure(r);
            },
            ra, rb, kinks, opt);
    }
    row.normalized_energy = row.localization > 0.0 ? row.Qsim / row.localization : 0.0;
    return row;
}

// Gradient mass of the ground state over the level band {t_minus < v < t_plus}.
// For the case1 construction this equals c * log(t_plus / t_minus) with c the
// coarea constant.
inline double null_criticality_mass(const GroundState& v, double t_minus, double t_plus,
                                    const RadialGrid& grid, const QuadOptions& opt = {}) {
    if (!(t_minus > 0.0) || !(t_plus >= t_minus))
        throw PreconditionError(ErrorCode::LevelOutOfRange, "requires 0 < t_minus <= t_plus");
    if (t_minus == t_plus) return 0.0;
    if (!(t_plus < v.sup_value()))
        throw PreconditionError(ErrorCode::LevelOutOfRange,
                                "t_plus must lie strictly below the range supremum");
    const double p = grid.params().p;
    double mass = 0.0;
    for (auto [ra, rb] : v.level_set(t_minus, t_plus)) {
        mass += integrate_log(
            [&](double r) {
                return std::pow(std::abs(v.derivative(r)), p) * grid.measure(r);
            },
            ra, rb, opt);
    }
    return mass;
}

// ---------------------------------------------------------------------------
// The 1D impossibility probe.

struct ProbeResult {
    double lhs = 0.0;  // int_0^1 |phi_eps|^p dt / t
    double rhs = 0.0;  // int_0^1 (t |phi_eps'|)^p dt / t
    double ratio() const { return lhs / rhs; }
};

namespace detail {

// phi_eps: linear ramp on (0, eps); |log t|^{-gamma} on (eps, 1/2); a fixed
// tail on (1/2, 1), independent of eps: a quintic that matches the middle
// piece's value and slope at 1/2 and descends to zero with two vanishing
// derivatives at 1/2 + kProbeTailWidth, zero beyond.
struct ProbeFamily {
    static constexpr double kProbeTailWidth = 0.10;

    double gamma;
    double eps;

    double mid(double t) const { return std::pow(std::log(1.0 / t), -gamma); }
    double mid_deriv(double t) const {
        return gamma * std::pow(std::log(1.0 / t), -gamma - 1.0) / t;
    }
    // Quintic Hermite basis on [0, 1]: h00(0) = 1, h10'(0) = 1, all other
    // endpoint values and first/second derivatives zero.
    static double h00(double u) {
        return 1.0 - 10.0 * u * u * u + 15.0 * u * u * u * u - 6.0 * u * u * u * u * u;
    }
    static double dh00(double u) {
        return -30.0 * u * u + 60.0 * u * u * u - 30.0 * u * u * u * u;
    }
    static double h10(double u) {
        return u - 6.0 * u * u * u + 8.0 * u * u * u * u - 3.0 * u * u * u * u * u;
    }
    static double dh10(double u) {
        return 1.0 - 18.0 * u * u + 32.0 * u * u * u - 15.0 * u * u * u * u;
    }
    double tail(double t) const {
        if (t >= 0.5 + kProbeTailWidth) return 0.0;
        const double u = (t - 0.5) / kProbeTailWidth;
        return mid(0.5) * h00(u) + mid_deriv(0.5) * kProbeTailWidth * h10(u);
    }
    double tail_deriv(double t) const {
        if (t >= 0.5 + kProbeTailWidth) return 0.0;
        const double u = (t - 0.5) / kProbeTailWidth;
        return (mid(0.5) * dh00(u) + mid_deriv(0.5) * kProbeTailWidth * dh10(u)) /
               kProbeTailWidth;
    }

    double value(double t) const {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        if (t < eps) return t / (eps * std::pow(std::log(1.0 / eps), gamma));
        if (t <= 0.5) return mid(t);
        return tail(t);
    }
    double derivative(double t) const {
        if (t <= 0.0 || t >= 1.0) return 0.0;
        if (t < eps) return 1.0 / (eps * std::pow(std::log(1.0 / eps), gamma));
        if (t <= 0.5) return mid_deriv(t);
        return tail_deriv(t);
    }
};

}  // namespace detail

inline ProbeResult optimality_probe(double p, double gamma_exponent, double eps,
                                    const QuadOptions& opt = {}) {
    if (!(eps > 0.0 && eps < 0.5))
        throw PreconditionError(ErrorCode::LevelOutOfRange, "requires eps in (0, 1/2)");
    if (!(gamma_exponent > 0.0))
        throw PreconditionError(ErrorCode::LevelOutOfRange, "requires gamma > 0");
    detail::ProbeFamily phi{gamma_exponent, eps};
    // On the ramp, t |phi'| == phi, so both integrals share the closed form
    //   int_0^eps (t / (eps |log eps|^gamma))^p dt/t = |log eps|^{-gamma p} / p.
    const double ramp = std::pow(std::log(1.0 / eps), -gamma_exponent * p) / p;
    const double cuts[2] = {0.5, 0.5 + detail::ProbeFamily::kProbeTailWidth};
    ProbeResult out;
    out.lhs = ramp + integrate_log(
                         [&](double t) { return std::pow(std::abs(phi.value(t)), p) / t; },
                         eps, 1.0, cuts, opt);
    out.rhs = ramp +
              integrate_log(
                  [&](double t) { return std::pow(std::abs(t * phi.derivative(t)), p) / t; },
                  eps, 1.0, cuts, opt);
    return out;
}

// ---------------------------------------------------------------------------
// Orchestration.

struct WindowSeries {
    VerificationWindow window;
    double lambda_hat;
};

struct MassRow {
    double t_minus, t_plus, mass;
};

struct OptimalityReport {
    std::string construction;
    double p = 0.0;
    int n = 0;
    std::optional<double> expected_lambda0;
    bool claims_optimal = false;

    std::vector<WindowSeries> global_windows;  // growing, first is the base
    std::vector<WindowSeries> inner_windows;
    std::vector<WindowSeries> outer_windows;
    std::vector<NullSequenceRow> null_seq;
    std::vector<MassRow> mass_divergence;

    double lambda_hat = 0.0;  // base global window
    // Minimizer of the base window (owned copies; the window grid is local).
    std::vector<double> minimizer_nodes;
    std::vector<double> minimizer_values;

    // Flags against the pinned acceptance thresholds.
    bool best_constant_ok = false;   // base lambda in [0.97, 1.05], decreasing toward 1
    bool end_windows_ok = false;     // end-window lambdas in [0.97, 1.3], decreasing
    bool null_seq_ok = false;        // normalized energy decreasing, final < 1/2 first
    bool mass_ok = false;            // strictly increasing, last > 10 x first
    bool consistent_subcritical = false;  // near-end lambda > 1.1 (non-optimal inputs)
};

struct VerifySpec {
    VerificationWindow base_window;
    VerificationWindow inner_window;
    VerificationWindow outer_window;
    int window_doublings = 3;
    int end_widenings = 2;
    std::vector<int> sequence_indices = {10, 100, 1000};
    std::size_t grid_nodes = 4096;
    std::uint64_t seed = 0;
    // Mass bands in v-levels: (band_hi * 10^{-k}, band_hi), k = 0..band_decades.
    double band_hi_fraction = 0.9;  // of sup v (or of 1.0 when unbounded)
    int band_decades = 6;
};

inline OptimalityReport verify_construction(const GreenProfile& G, const Weight& W,
                                            const GroundState& v, const ProblemParams& params,
                                            const VerifySpec& spec) {
    OptimalityReport rep;
    rep.construction = weight_kind_name(W.tag().kind);
    rep.p = params.p;
    rep.n = params.n;
    rep.expected_lambda0 = W.expected_lambda0();
    rep.claims_optimal = W.claims_optimal();

    MinimizeOptions mopt;
    mopt.seed = spec.seed;

    auto run_window = [&](const VerificationWindow& w) {
        RadialGrid grid = RadialGrid::log_spaced(params, G.domain(), w.r_lo, w.r_hi,
                                                 spec.grid_nodes);
        auto res = rayleigh_min(W, nullptr, grid, w, &v, mopt);
        return res;
    };

    // Global windows: log-width doubles about the geometric center.
    {
        VerificationWindow w = spec.base_window;
        for (int k = 0; k <= spec.window_doublings; ++k) {
            auto res = run_window(w);
            rep.global_windows.push_back({w, res.lambda_hat});
            if (k == 0) {
                rep.lambda_hat = res.lambda_hat;
                rep.minimizer_nodes = res.minimizer.grid->nodes();
                rep.minimizer_values = res.minimizer.values;
            }
            const double c = std::sqrt(w.r_lo * w.r_hi);
            const double half = std::sqrt(w.r_hi / w.r_lo);
            w.r_lo = c / (half * half);
            w.r_hi = c * (half * half);
        }
    }
    // End windows: widen toward the end, the opposite edge fixed. On a
    // bounded side the gap to the boundary halves geometrically instead.
    {
        const RadialDomain& dom = G.domain();
        VerificationWindow w = spec.inner_window;
        for (int k = 0; k <= spec.end_widenings; ++k) {
            rep.inner_windows.push_back({w, run_window(w).lambda_hat});
            w.r_lo = (dom.r1 > 0.0) ? std::sqrt(w.r_lo * dom.r1) : w.r_lo * w.r_lo / w.r_hi;
        }
        w = spec.outer_window;
        for (int k = 0; k <= spec.end_widenings; ++k) {
            rep.outer_windows.push_back({w, run_window(w).lambda_hat});
            w.r_hi = std::isfinite(dom.r2) ? std::sqrt(w.r_hi * dom.r2)
                                           : w.r_hi * w.r_hi / w.r_lo;
        }
    }
    // Null sequence.
    {
        const auto& base = spec.base_window;
        RadialGrid grid = RadialGrid::log_spaced(params, G.domain(), base.r_lo, base.r_hi,
                                                 std::max<std::size_t>(64, spec.grid_nodes / 8));
        for (int idx : spec.sequence_indices) rep.null_seq.push_back(null_sequence(v, idx, grid));
    }
    // Mass bands.
    {
        const auto& base = spec.base_window;
        RadialGrid grid = RadialGrid::log_spaced(params, G.domain(), base.r_lo, base.r_hi,
                                                 std::max<std::size_t>(64, spec.grid_nodes / 8));
        const double hi = std::isfinite(v.sup_value()) ? spec.band_hi_fraction * v.sup_value()
                                                       : 1.0;
        for (int k = 0; k <= spec.band_decades; ++k) {
            const double lo = 0.5 * hi * std::pow(10.0, -k);
            rep.mass_divergence.push_back({lo, hi, null_criticality_mass(v, lo, hi, grid)});
        }
    }

    auto decreasing = [](const std::vector<WindowSeries>& s) {
        for (std::size_t i = 1; i < s.size(); ++i)
            if (!(s[i].lambda_hat < s[i - 1].lambda_hat + 1e-10)) return false;
        return true;
    };
    rep.best_constant_ok = rep.lambda_hat >= 0.97 && rep.lambda_hat <= 1.05 &&
                           decreasing(rep.global_windows);
    bool ends_ok = true;
    for (const auto* s : {&rep.inner_windows, &rep.outer_windows}) {
        if (s->empty()) continue;
        const double l0 = s->front().lambda_hat;
        ends_ok = ends_ok && l0 >= 0.97 && l0 <= 1.3 && decreasing(*s);
    }
    rep.end_windows_ok = ends_ok;
    if (rep.null_seq.size() >= 2) {
        bool dec = true;
        for (std::size_t i = 1; i < rep.null_seq.size(); ++i)
            dec = dec && rep.null_seq[i].normalized_energy <
                             rep.null_seq[i - 1].normalized_energy;
        rep.null_seq_ok =
            dec && rep.null_seq.back().normalized_energy <
                       0.5 * rep.null_seq.front().normalized_energy;
    }
    if (rep.mass_divergence.size() >= 2) {
        bool inc = true;
        for (std::size_t i = 1; i < rep.mass_divergence.size(); ++i)
            inc = inc && rep.mass_divergence[i].mass > rep.mass_divergence[i - 1].mass;
        rep.mass_ok = inc && rep.mass_divergence.back().mass >
                                 10.0 * rep.mass_divergence.front().mass;
    }
    // Optimal weights drive the widest end-window quotients toward 1; a
    // quotient still above 1.1 after widening is consistent with a
    // subcritical functional.
    const double near_end_min =
        std::min(rep.inner_windows.empty() ? std::numeric_limits<double>::infinity()
                                           : rep.inner_windows.back().lambda_hat,
                 rep.outer_windows.empty() ? std::numeric_limits<double>::infinity()
                                           : rep.outer_windows.back().lambda_hat);
    rep.consistent_subcritical = std::isfinite(near_end_min) && near_end_min > 1.1;
    return rep;
}

}  // namespace hardyopt
