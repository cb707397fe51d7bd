#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hardyopt/weights.hpp"

using namespace hardyopt;

namespace {

std::vector<double> sample_radii(const RadialDomain& dom, int count = 40) {
    const auto [lo, hi] = dom.sample_range();
    std::vector<double> out;
    for (int i = 0; i <= count; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / count));
    return out;
}

// Potential of an exact radial solution: V = Delta_p(v) / v^{p-1}, so that
// Q_V(v) = 0 pointwise. For v = r^beta this is kappa r^{-p} with
// kappa = |beta|^{p-2} beta [ (beta-1)(p-1) + n-1 ].
double power_potential_coeff(double p, int n, double beta) {
    return pow_abs(beta, p - 2.0) * beta * ((beta - 1.0) * (p - 1.0) + n - 1.0);
}

}  // namespace

TEST_CASE("case1: classical Hardy weights") {
    {
        ProblemParams params(2.0, 3);
        auto G = green_radial(params, RadialDomain::punctured_space());
        auto [W, v] = hardy_weight_case1(G, params);
        CHECK(W(1.0) == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(W(2.0) == doctest::Approx(0.25 / 4.0).epsilon(1e-15));
        CHECK(v.value(4.0) == doctest::Approx(0.5).epsilon(1e-15));  // G^{1/2} = r^{-1/2}
        CHECK(*W.expected_lambda0() == 1.0);
        CHECK(W.claims_optimal());
    }
    {
        // |(p-n)/p|^p r^{-p} with (p, n) = (4, 2): (1/2)^4 r^{-4}.
        ProblemParams params(4.0, 2);
        auto G = green_radial(params, RadialDomain::punctured_space());
        auto [W, v] = hardy_weight_case1(G, params);
        CHECK(W(1.0) == doctest::Approx(std::pow(0.5, 4)).epsilon(1e-14));
        CHECK(W(3.0) == doctest::Approx(std::pow(0.5, 4) / 81.0).epsilon(1e-14));
    }
}

TEST_CASE("case1: scale invariance and classification guard") {
    ProblemParams params(2.0, 3);
    auto G = green_radial(params, RadialDomain::punctured_space());
    auto [W, v] = hardy_weight_case1(G, params);
    auto [Wc, vc] = hardy_weight_case1(G.scaled(7.5), params);
    for (double r : sample_radii(G.domain(), 12))
        CHECK(Wc(r) == doctest::Approx(W(r)).epsilon(1e-14));
    // A8GammaPos profiles belong to case 2.
    ProblemParams pb(3.0, 2);
    auto Gb = green_radial(pb, RadialDomain::punctured_ball(1.0));
    CHECK_THROWS_AS(hardy_weight_case1(Gb, pb), PreconditionError);
}

TEST_CASE("case2: weight, zeros, ground state") {
    ProblemParams params(3.0, 2);
    auto G = green_radial(params, RadialDomain::punctured_ball(1.0));
    auto [W, v] = hardy_weight_case2(G, 1.0, params);
    CHECK(W(0.25) == 0.0);  // G = gamma/2 there
    CHECK(W(0.5) > 0.0);
    // Ground state peaks where G = gamma/2 with value (gamma^2/4)^{(p-1)/p}.
    CHECK(v.value(0.25) == doctest::Approx(std::pow(0.25, 2.0 / 3.0)).epsilon(1e-14));
    CHECK(v.sup_value() == doctest::Approx(std::pow(0.25, 2.0 / 3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(hardy_weight_case2(G, 2.0, params), PreconditionError);  // gamma mismatch
    // p <= n is rejected.
    ProblemParams p2(2.0, 3);
    auto G2 = green_radial(p2, RadialDomain::punctured_space());
    CHECK_THROWS_AS(hardy_weight_case2(G2, 1.0, p2), PreconditionError);
}

TEST_CASE("case2 formula: p = 2 reduction") {
    // At p = 2 the displayed weight reduces to (1/4) |grad log(G/(gamma-G))|^2;
    // the |gamma - 2G|^{p-2} factor is 1 by the removable-singularity rule.
    const double gamma = 1.0;
    for (double g : {0.1, 0.3, 0.5, 0.8}) {
        const double dG = -0.37;
        const double direct = case2_weight_value(2.0, gamma, g, dG);
        const double logform = 0.25 * std::pow(dG * gamma / (g * (gamma - g)), 2.0);
        CHECK(direct == doctest::Approx(logform).epsilon(1e-14));
    }
    CHECK(case2_weight_value(2.0, gamma, 0.5, -0.37) > 0.0);  // no zero at p = 2
}

TEST_CASE("case2 zero locus: root bracketing to 1e-12") {
    ProblemParams params(3.0, 2);
    auto G = green_radial(params, RadialDomain::punctured_ball(1.0));
    auto [W, v] = hardy_weight_case2(G, 1.0, params);
    // Bracket the sign change of gamma - 2G.
    double a = 1e-6, b = 1.0 - 1e-9;
    auto h = [&](double r) { return 1.0 - 2.0 * G.value(r); };
    REQUIRE(h(a) < 0.0);
    REQUIRE(h(b) > 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (a + b);
        if (h(mid) < 0.0) a = mid;
        else b = mid;
    }
    const double r_star = 0.5 * (a + b);
    CHECK(std::abs(r_star - 0.25) < 1e-12);
    CHECK(std::abs(G.inverse(0.5) - 0.25) < 1e-12);
}

TEST_CASE("alpha family") {
    ProblemParams params(3.0, 5);
    auto G = green_radial(params, RadialDomain::punctured_space());
    const double q = 2.0 / 3.0;
    auto [Wq, vq] = hardy_weight_alpha(G, q, params);
    auto [W1, v1] = hardy_weight_case1(G, params);
    for (double r : sample_radii(G.domain(), 10))
        CHECK(Wq(r) == doctest::Approx(W1(r)).epsilon(1e-13));
    CHECK(Wq.claims_optimal());
    CHECK(*Wq.expected_lambda0() == 1.0);

    auto [Ws, vs] = hardy_weight_alpha(G, 0.31, params);
    CHECK_FALSE(Ws.claims_optimal());
    CHECK_FALSE(Ws.expected_lambda0().has_value());

    // The factor alpha^{p-1}(1 - alpha) kills the weight at the range ends.
    auto [W_lo, v_lo] = hardy_weight_alpha(G, 1e-4, params);
    auto [W_hi, v_hi] = hardy_weight_alpha(G, 1.0 - 1e-4, params);
    CHECK(W_lo(1.0) < 1e-7 * W1(1.0));
    CHECK(W_hi(1.0) < 1e-3 * W1(1.0));
    CHECK_THROWS_AS(hardy_weight_alpha(G, 0.0, params), PreconditionError);
    CHECK_THROWS_AS(hardy_weight_alpha(G, 1.0, params), PreconditionError);

    // p = 2, alpha = 1/2: (1/4)|grad log G|^2.
    ProblemParams p2(2.0, 3);
    auto G2 = green_radial(p2, RadialDomain::punctured_space());
    auto [Wh, vh] = hardy_weight_alpha(G2, 0.5, p2);
    for (double r : {0.3, 1.0, 5.0}) {
        const double expect = 0.25 * std::pow(G2.derivative(r) / G2.value(r), 2.0);
        CHECK(Wh(r) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("argmax of alpha^{p-1}(1-alpha) sits at (p-1)/p") {
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
        double best_a = 0.0, best = -1.0;
        const int steps = 200000;
        for (int i = 1; i < steps; ++i) {
            const double a = static_cast<double>(i) / steps;
            const double val = std::pow(a, p - 1.0) * (1.0 - a);
            if (val > best) {
                best = val;
                best_a = a;
            }
        }
        CHECK(std::abs(best_a - (p - 1.0) / p) < 1e-4);
    }
}

TEST_CASE("two ends: optimal-alpha bracket matches the displayed form") {
    // At alpha = (p-1)/p the bracket is [2(p-2) v1 + (M-m)^2] with the
    // constant ((p-1)/p)^p.
    const double p = 3.0, m = 0.5, M = 1.0;
    const double q = (p - 1.0) / p;
    for (double g : {0.55, 0.7, 0.9, 0.99}) {
        const double dG = -0.81;
        const double v1 = (g - m) * (M - g);
        const double expect = std::pow(q, p) * std::pow(std::abs(dG / v1), p) *
                              pow_abs(m + M - 2.0 * g, p - 2.0) *
                              (2.0 * (p - 2.0) * v1 + (M - m) * (M - m));
        CHECK(two_ends_weight_value(p, q, m, M, g, dG) ==
              doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("two ends: p = 2 annulus reduction") {
    // G = 1/r on the annulus (1, 2): m = 1/2, M = 1, alpha = 1/2 gives
    // W = (1/4) |grad log((G - m)/(M - G))|^2.
    ProblemParams params(2.0, 3);
    auto dom = RadialDomain::annulus(1.0, 2.0);
    auto G = GreenProfile::power(-1.0, 1.0, dom, Classification::two_ends(0.5, 1.0));
    auto [W, v] = hardy_weight_two_ends(G, 0.5, 1.0, 0.5, params);
    for (double r : {1.1, 1.4, 1.9}) {
        const double g = 1.0 / r, dg = -1.0 / (r * r);
        const double lg = dg / (g - 0.5) + dg / (1.0 - g);
        CHECK(W(r) == doctest::Approx(0.25 * lg * lg).epsilon(1e-13));
    }
    CHECK(W.claims_optimal());
    // m > 0 confines alpha to [1/2, 1].
    CHECK_THROWS_AS(hardy_weight_two_ends(G, 0.5, 1.0, 0.3, params), PreconditionError);
    // Mismatched end limits are rejected.
    CHECK_THROWS_AS(hardy_weight_two_ends(G, 0.25, 1.0, 0.5, params), PreconditionError);
}

TEST_CASE("two ends with m = 0, M = gamma coincides with case2") {
    ProblemParams params(3.0, 2);
    auto ball = RadialDomain::punctured_ball(1.0);
    auto Gb = green_radial(params, ball);
    // Same profile viewed as a two-ends profile with limits (0, 1).
    auto Gt = GreenProfile::power_shift(0.5, 1.0, -1.0, ball, Classification::two_ends(0.0, 1.0));
    const double q = 2.0 / 3.0;
    auto [Wc, vc] = hardy_weight_case2(Gb, 1.0, params);
    auto [Wt, vt] = hardy_weight_two_ends(Gt, 0.0, 1.0, q, params);
    for (double r : sample_radii(ball, 16)) {
        CHECK(Wt(r) == doctest::Approx(Wc(r)).epsilon(1e-10));
        CHECK(vt.value(r) == doctest::Approx(vc.value(r)).epsilon(1e-10));
    }
}

TEST_CASE("two ends: unbounded branch") {
    // A7 profile with m = 0 reduces to the case1 weight at the optimal alpha.
    ProblemParams params(2.0, 3);
    auto G = green_radial(params, RadialDomain::punctured_space());
    auto [Wu, vu] =
        hardy_weight_two_ends(G, 0.0, std::numeric_limits<double>::infinity(), 0.5, params);
    auto [W1, v1] = hardy_weight_case1(G, params);
    for (double r : {0.2, 1.0, 30.0}) CHECK(Wu(r) == doctest::Approx(W1(r)).epsilon(1e-13));
    // Finite limits on both ends cannot use the unbounded branch.
    auto Ga = GreenProfile::power(-1.0, 1.0, RadialDomain::annulus(1.0, 2.0),
                                  Classification::two_ends(0.5, 1.0));
    CHECK_THROWS_AS(
        hardy_weight_two_ends(Ga, 0.5, std::numeric_limits<double>::infinity(), 0.5, params),
        PreconditionError);
}

TEST_CASE("G/(gamma-G) interpolation weight") {
    ProblemParams params(3.0, 2);
    auto G = green_radial(params, RadialDomain::punctured_ball(1.0));
    {
        auto [W, v] = cor84_weight(G, 1.0, 0.0, params);
        for (double r : {0.1, 0.5, 0.9}) {
            CHECK(W(r) == 0.0);
            CHECK(v.value(r) == doctest::Approx(G.value(r)).epsilon(1e-14));
        }
    }
    {
        // alpha = 1/2, p > 2: the |gamma(1-alpha) - G|^{p-2} factor vanishes
        // where G = gamma/2.
        auto [W, v] = cor84_weight(G, 1.0, 0.5, params);
        CHECK(W(0.25) == 0.0);
        CHECK(W(0.5) > 0.0);
        CHECK_FALSE(W.claims_optimal());
        CHECK_FALSE(W.expected_lambda0().has_value());
    }
    // p = 2, alpha = 1/2 reduces to (1/4)|grad log(G/(gamma-G))|^2.
    for (double g : {0.2, 0.5, 0.7}) {
        const double dG = 0.4;
        const double expect = 0.25 * std::pow(dG / (g * (1.0 - g)), 2.0);
        CHECK(cor84_weight_value(2.0, 0.5, 1.0, g, dG) ==
              doctest::Approx(expect).epsilon(1e-14));
    }
    CHECK_THROWS_AS(cor84_weight(G, 1.0, 1.5, params), PreconditionError);
}

TEST_CASE("quotient-form weight equals case2 and solves its own equation") {
    ProblemParams params(3.0, 2);
    auto G = green_radial(params, RadialDomain::punctured_ball(1.0));
    auto [Wc, vc] = hardy_weight_case2(G, 1.0, params);
    auto [Wq, vq] = eq85_weight(G, 1.0, params);
    for (double r : sample_radii(G.domain(), 24)) {
        if (Wc(r) == 0.0) {
            CHECK(std::abs(Wq(r)) < 1e-20);
        } else {
            CHECK(Wq(r) == doctest::Approx(Wc(r)).epsilon(1e-12));
        }
    }
    // Defining property: -Delta_p(psi(G)) - W psi(G)^{p-1} = 0 pointwise.
    for (double r : {0.03, 0.2, 0.6, 0.95})
        CHECK(ground_state_residual(Wq, vq, params, r) < 1e-10);
}

TEST_CASE("ground-state residual vanishes for every optimal construction") {
    {
        ProblemParams params(2.0, 3);
        auto G = green_radial(params, RadialDomain::punctured_space());
        auto [W, v] = hardy_weight_case1(G, params);
        for (double r : sample_radii(G.domain(), 20))
            CHECK(ground_state_residual(W, v, params, r) < 1e-6);
    }
    {
        ProblemParams params(4.0, 2);
        auto G = green_radial(params, RadialDomain::punctured_space());
        auto [W, v] = hardy_weight_case1(G, params);
        for (double r : sample_radii(G.domain(), 20))
            CHECK(ground_state_residual(W, v, params, r) < 1e-6);
    }
    {
        ProblemParams params(3.0, 2);
        auto G = green_radial(params, RadialDomain::punctured_ball(1.0));
        auto [W, v] = hardy_weight_case2(G, 1.0, params);
        for (double r : sample_radii(G.domain(), 20))
            CHECK(ground_state_residual(W, v, params, r) < 1e-6);
    }
    {
        // Alpha family solves Q_{-W_alpha}(G^alpha) = 0 for any alpha.
        ProblemParams params(3.0, 5);
        auto G = green_radial(params, RadialDomain::punctured_space());
        auto [W, v] = hardy_weight_alpha(G, 0.37, params);
        for (double r : sample_radii(G.domain(), 20))
            CHECK(ground_state_residual(W, v, params, r) < 1e-6);
    }
    {
        ProblemParams params(2.0, 3);
        auto Ga = GreenProfile::power(-1.0, 1.0, RadialDomain::annulus(1.0, 2.0),
                                      Classification::two_ends(0.5, 1.0));
        auto [W, v] = hardy_weight_two_ends(Ga, 0.5, 1.0, 0.5, params);
        for (double r : sample_radii(Ga.domain(), 20))
            CHECK(ground_state_residual(W, v, params, r) < 1e-6);
    }
    {
        // The interpolation family solves its own equation for any alpha.
        ProblemParams params(3.0, 2);
        auto G = green_radial(params, RadialDomain::punctured_ball(1.0));
        auto [W, v] = cor84_weight(G, 1.0, 0.3, params);
        for (double r : sample_radii(G.domain(), 20))
            CHECK(ground_state_residual(W, v, params, r) < 1e-6);
    }
}

TEST_CASE("nonnegativity of all weights on samples") {
    ProblemParams p32(3.0, 2);
    auto Gb = green_radial(p32, RadialDomain::punctured_ball(1.0));
    auto [W2, v2] = hardy_weight_case2(Gb, 1.0, p32);
    auto [W8, v8] = cor84_weight(Gb, 1.0, 0.25, p32);
    ProblemParams p23(2.0, 3);
    auto Gs = green_radial(p23, RadialDomain::punctured_space());
    auto [W1, v1] = hardy_weight_case1(Gs, p23);
    for (double r : sample_radii(Gb.domain(), 50)) {
        CHECK(W2(r) >= -1e-14);
        CHECK(W8(r) >= -1e-14);
    }
    for (double r : sample_radii(Gs.domain(), 50)) CHECK(W1(r) >= -1e-14);
}

TEST_CASE("radial interpolation of two supersolutions") {
    // v0 = G (p-harmonic), v1 = 1, V0 = V1 = 0: the weight matches the alpha
    // family with the roles of the exponents swapped.
    ProblemParams params(3.0, 5);
    auto dom = RadialDomain::annulus(0.25, 8.0);
    auto G = green_radial(params, RadialDomain::punctured_space());
    auto v0 = RadialFunction::from_profile(G);
    auto v1 = RadialFunction::constant(1.0);
    auto V0 = PotentialProfile::zero();
    const double alpha = 0.3;
    auto res = supersolution_construct_radial(v0, V0, v1, V0, alpha, params, dom);
    for (double r : sample_radii(dom, 12)) {
        const double expect = alpha_weight_value(params.p, 1.0 - alpha, G.value(r),
                                                 G.derivative(r));
        CHECK(res.W_alpha(r) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(res.v_alpha.value(r) ==
              doctest::Approx(std::pow(G.value(r), 1.0 - alpha)).epsilon(1e-13));
        CHECK(res.V_alpha.value(r) == 0.0);
    }
    // alpha = 0 returns v0 and a zero weight.
    auto res0 = supersolution_construct_radial(v0, V0, v1, V0, 0.0, params, dom);
    for (double r : sample_radii(dom, 8)) {
        CHECK(res0.W_alpha(r) == 0.0);
        CHECK(res0.v_alpha.value(r) == doctest::Approx(G.value(r)).epsilon(1e-14));
    }
}

TEST_CASE("optimizing the interpolation exponent recovers the Hardy weight") {
    // v0 = 1, v1 = v: W_alpha = alpha^{p-1}(1-alpha)(p-1)|v'/v|^p, maximal at
    // alpha = (p-1)/p where it equals ((p-1)/p)^p |v'/v|^p.
    ProblemParams params(2.0, 3);
    auto dom = RadialDomain::annulus(0.5, 2.0);
    auto v1 = RadialFunction::power(-1.0);
    auto v0 = RadialFunction::constant(1.0);
    auto V0 = PotentialProfile::zero();
    const double q = 0.5;
    auto res = supersolution_construct_radial(v0, V0, v1, V0, q, params, dom);
    for (double r : sample_radii(dom, 10)) {
        const double expect = std::pow(q, params.p) * std::pow(1.0 / r, params.p);
        CHECK(res.W_alpha(r) == doctest::Approx(expect).epsilon(1e-13));
    }
    // Scanning alpha confirms the maximum at (p-1)/p.
    double best_a = 0.0, best = -1.0;
    for (int i = 1; i < 1000; ++i) {
        const double a = i / 1000.0;
        auto r2 = supersolution_construct_radial(v0, V0, v1, V0, a, params, dom);
        const double w = r2.W_alpha(1.0);
        if (w > best) {
            best = w;
            best_a = a;
        }
    }
    CHECK(std::abs(best_a - (params.p - 1.0) / params.p) < 2e-3);
}

TEST_CASE("interpolation residual: exact solutions stay solutions") {
    // v_j = r^{beta_j} solve Q_{V_j}(v) = 0 with V_j = kappa_j r^{-p}.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ub(-1.5, 1.5), ual(0.05, 0.95);
    for (double p : {1.5, 2.0, 3.0}) {
        ProblemParams params(p, 3);
        auto dom = RadialDomain::annulus(0.2, 5.0);
        for (int trial = 0; trial < 6; ++trial) {
            double b0 = ub(rng), b1 = ub(rng);
            if (std::abs(b0) < 0.1) b0 = 0.6;
            if (std::abs(b1 - b0) < 0.1) b1 = b0 + 0.8;
            const double alpha = ual(rng);
            if (std::abs((1.0 - alpha) * b0 + alpha * b1) < 0.05) continue;
            auto v0 = RadialFunction::power(b0);
            auto v1 = RadialFunction::power(b1);
            const double k0 = power_potential_coeff(p, 3, b0);
            const double k1 = power_potential_coeff(p, 3, b1);
            PotentialProfile V0{[=](double r) { return k0 * std::pow(r, -p); }};
            PotentialProfile V1{[=](double r) { return k1 * std::pow(r, -p); }};
            auto res = supersolution_construct_radial(v0, V0, v1, V1, alpha, params, dom);
            PotentialProfile diff{[&, res](double r) {
                return res.V_alpha.value(r) - res.W_alpha(r);
            }};
            for (double r : sample_radii(dom, 10)) {
                auto [signed_res, scale] = q_residual(res.v_alpha, diff, params, r);
                CHECK(std::abs(signed_res) <= 1e-8 * (scale + 1e-300));
            }
        }
    }
}

TEST_CASE("interpolation rejects vanishing log-derivatives it cannot absorb") {
    // p > 2 with a nonzero potential on a flat profile hits |log v|' = 0.
    ProblemParams params(3.0, 3);
    auto dom = RadialDomain::annulus(0.5, 2.0);
    auto flat = RadialFunction::constant(2.0);
    auto v1 = RadialFunction::power(1.0);
    PotentialProfile V0{[](double) { return -1.0; }};
    CHECK_THROWS_AS(
        supersolution_construct_radial(flat, V0, v1, PotentialProfile::zero(), 0.5, params, dom),
        PreconditionError);
}

TEST_CASE("sign-definite potential envelope") {
    ProblemParams p2(2.0, 3);
    auto dom = RadialDomain::annulus(0.5, 2.0);
    PotentialProfile Va{[](double r) { return 1.0 + r; }};
    PotentialProfile Vb{[](double r) { return 2.0 / r; }};
    // p = 2: plain convex combination.
    auto mix = convex_combination_potential(Va, Vb, 0.3, p2, dom);
    for (double r : sample_radii(dom, 8))
        CHECK(mix.value(r) ==
              doctest::Approx(0.7 * Va.value(r) + 0.3 * Vb.value(r)).epsilon(1e-14));
    // alpha = 1 returns V1; equal inputs return themselves.
    auto mix1 = convex_combination_potential(Va, Vb, 1.0, p2, dom);
    for (double r : sample_radii(dom, 8))
        CHECK(mix1.value(r) == doctest::Approx(Vb.value(r)).epsilon(1e-14));
    ProblemParams p15(1.5, 3);
    auto same = convex_combination_potential(Va, Va, 0.42, p15, dom);
    for (double r : sample_radii(dom, 8))
        CHECK(same.value(r) == doctest::Approx(Va.value(r)).epsilon(1e-13));
    // Sign conditions: p >= 2 needs nonpositive inputs, p <= 2 nonnegative.
    ProblemParams p3(3.0, 3);
    CHECK_THROWS_AS(convex_combination_potential(Va, Vb, 0.5, p3, dom), PreconditionError);
    PotentialProfile Vneg{[](double) { return -1.0; }};
    CHECK_THROWS_AS(convex_combination_potential(Va, Vneg, 0.5, p2, dom), PreconditionError);
}

TEST_CASE("envelope majorizes the interpolated potential") {
    auto run_branch = [](double p, int n, double beta_lo, double beta_hi) {
        ProblemParams params(p, n);
        auto dom = RadialDomain::annulus(0.3, 3.0);
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> ub(beta_lo, beta_hi), ual(0.1, 0.9);
        for (int trial = 0; trial < 8; ++trial) {
            const double b0 = ub(rng), b1 = ub(rng), alpha = ual(rng);
            auto v0 = RadialFunction::power(b0);
            auto v1 = RadialFunction::power(b1);
            const double k0 = power_potential_coeff(p, n, b0);
            const double k1 = power_potential_coeff(p, n, b1);
            PotentialProfile V0{[=](double r) { return k0 * std::pow(r, -p); }};
            PotentialProfile V1{[=](double r) { return k1 * std::pow(r, -p); }};
            auto res = supersolution_construct_radial(v0, V0, v1, V1, alpha, params, dom);
            auto env = convex_combination_potential(V0, V1, alpha, params, dom);
            for (double r : sample_radii(dom, 16)) {
                const double scale = std::abs(env.value(r)) + std::abs(res.V_alpha.value(r));
                CHECK(env.value(r) >= res.V_alpha.value(r) - 1e-12 * (scale + 1.0));
            }
        }
    };
    // p >= 2 branch: exponents in (0, 1/2) give nonpositive potentials (n = 2).
    run_branch(3.0, 2, 0.05, 0.45);
    // 1 < p <= 2 branch: positive exponents give nonnegative potentials (n = 2).
    run_branch(1.5, 2, 0.2, 1.4);
}

TEST_CASE("hessian of xi^{p-1} eta^{2-p} is rank one with the advertised sign") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 100.0);
    for (double p : {1.5, 2.0, 3.0}) {
        for (int i = 0; i < 1000; ++i) {
            const double xi = u(rng), eta = u(rng);
            auto h = xi_eta_hessian(p, xi, eta);
            const double scale = std::abs(h.fxx) + std::abs(h.fyy) + std::abs(h.fxy);
            CHECK(std::abs(h.det()) <= 1e-12 * scale * scale + 1e-280);
            if (p > 2.0) CHECK(h.trace() >= -1e-14 * scale);
            else if (p < 2.0) CHECK(h.trace() <= 1e-14 * scale);
            else CHECK(std::abs(h.trace()) <= 1e-300);
        }
    }
}
