#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hardyopt/optimality.hpp"

using namespace hardyopt;

TEST_CASE("rayleigh: scaling the weight scales the quotient inversely") {
    ProblemParams params(2.0, 3);
    auto dom = RadialDomain::punctured_space();
    auto G = green_radial(params, dom);
    auto [W, v] = hardy_weight_case1(G, params);
    auto grid = RadialGrid::log_spaced(params, dom, 1e-2, 1e2, 257);
    auto win = VerificationWindow::global(1e-2, 1e2);
    MinimizeOptions mo;
    auto r1 = rayleigh_min(W, nullptr, grid, win, &v, mo);
    auto r2 = rayleigh_min(W.scaled(2.0), nullptr, grid, win, &v, mo);
    CHECK(r2.lambda_hat == doctest::Approx(0.5 * r1.lambda_hat).epsilon(1e-7));
}

TEST_CASE("rayleigh: p = 2 window value matches the spectral closed form") {
    // On [a, b] the reduced problem gives 1 + 4 pi^2 / log(b/a)^2.
    ProblemParams params(2.0, 3);
    auto dom = RadialDomain::punctured_space();
    auto G = green_radial(params, dom);
    auto [W, v] = hardy_weight_case1(G, params);
    auto grid = RadialGrid::log_spaced(params, dom, 1e-3, 1e3, 1025);
    auto res = rayleigh_min(W, nullptr, grid, VerificationWindow::global(1e-3, 1e3), &v);
    const double L = std::log(1e6);
    CHECK(res.lambda_hat == doctest::Approx(1.0 + 4.0 * kPi * kPi / (L * L)).epsilon(1e-4));
}

TEST_CASE("rayleigh: enlarging the window never increases the minimum") {
    ProblemParams params(3.0, 5);
    auto dom = RadialDomain::punctured_space();
    auto G = green_radial(params, dom);
    auto [W, v] = hardy_weight_case1(G, params);
    double prev = std::numeric_limits<double>::infinity();
    for (double span : {1e1, 1e2, 1e4}) {
        auto grid = RadialGrid::log_spaced(params, dom, 1.0 / span, span, 513);
        auto res =
            rayleigh_min(W, nullptr, grid, VerificationWindow::global(1.0 / span, span), &v);
        CHECK(res.lambda_hat <= prev + 1e-10);
        prev = res.lambda_hat;
    }
}

TEST_CASE("rayleigh: zero weight raises ZeroDenominator") {
    ProblemParams params(2.0, 3);
    auto dom = RadialDomain::punctured_space();
    Weight W0([](double) { return 0.0; }, {}, std::nullopt, false);
    auto grid = RadialGrid::log_spaced(params, dom, 0.1, 10.0, 64);
    CHECK_THROWS_AS(
        rayleigh_min(W0, nullptr, grid, VerificationWindow::global(0.1, 10.0), nullptr),
        PreconditionError);
}

TEST_CASE("null sequence: localization mass is n-independent") {
    ProblemParams params(2.0, 3);
    auto dom = RadialDomain::punctured_space();
    auto G = green_radial(params, dom);
    auto [W, v] = hardy_weight_case1(G, params);
    auto grid = RadialGrid::log_spaced(params, dom, 1e-2, 1e2, 64);
    auto r10 = null_sequence(v, 10, grid);
    auto r100 = null_sequence(v, 100, grid);
    auto r1000 = null_sequence(v, 1000, grid);
    CHECK(r10.localization == doctest::Approx(r100.localization).epsilon(1e-9));
    CHECK(r100.localization == doctest::Approx(r1000.localization).epsilon(1e-9));
    // The two-sided cutoff integrals follow the closed forms.
    CHECK(r100.X == doctest::Approx(4.0 * kPi / std::log(100.0)).epsilon(1e-8));
    const double y_expect = 2.0 * (2.0 * kPi) * std::log(100.0) * (4.0 / 3.0);
    CHECK(r100.Y == doctest::Approx(y_expect).epsilon(1e-8));
    CHECK_THROWS_AS(null_sequence(v, 2, grid), PreconditionError);
}

TEST_CASE("null sequence: narrow ground-state range is rejected") {
    // A profile with a small span caps sup v below the requested cutoff levels.
    ProblemParams params(3.0, 3);
    auto dom = RadialDomain::annulus(1.0, 2.0);
    auto G = green_radial(params, dom).scaled(0.01);
    auto [W, v] = hardy_weight_two_ends(G, 0.0, 0.01, 2.0 / 3.0, params);
    auto grid = RadialGrid::log_spaced(params, dom, 1.0001, 1.9999, 64);
    CHECK(v.sup_value() < 1.0 / 9.0);
    CHECK_THROWS_AS(null_sequence(v, 3, grid), PreconditionError);
}

TEST_CASE("mass bands: closed form, degenerate band, log-linearity") {
    ProblemParams params(2.0, 3);
    auto dom = RadialDomain::punctured_space();
    auto G = green_radial(params, dom);
    auto [W, v] = hardy_weight_case1(G, params);
    auto grid = RadialGrid::log_spaced(params, dom, 1e-2, 1e2, 64);
    const double e1 = std::exp(1.0);
    CHECK(null_criticality_mass(v, 1.0, e1, grid) == doctest::Approx(2.0 * kPi).epsilon(1e-9));
    CHECK(null_criticality_mass(v, 0.7, 0.7, grid) == 0.0);
    const double m1 = null_criticality_mass(v, 1.0, e1, grid);
    const double m2 = null_criticality_mass(v, 1.0, e1 * e1, grid);
    CHECK(m2 == doctest::Approx(2.0 * m1).epsilon(1e-9));
    CHECK_THROWS_AS(null_criticality_mass(v, 2.0, 1.0, grid), PreconditionError);
}

TEST_CASE("mass bands: case-2 level bands stay below the range supremum") {
    ProblemParams params(3.0, 2);
    auto dom = RadialDomain::punctured_ball(1.0);
    auto G = green_radial(params, dom);
    auto [W, v] = hardy_weight_case2(G, 1.0, params);
    auto grid = RadialGrid::log_spaced(params, dom, 1e-9, 1.0 - 1e-9, 64);
    CHECK_THROWS_AS(null_criticality_mass(v, 0.1, 0.5, grid), PreconditionError);
    const double hi = 0.9 * v.sup_value();
    CHECK(null_criticality_mass(v, hi / 10.0, hi, grid) > 0.0);
}

TEST_CASE("probe: ramp term vanishes and the convergent branch settles") {
    // The shared ramp contribution |log eps|^{-gamma p} / p tends to zero.
    const double p = 4.0, gamma = 1.0 / p;
    double prev = 1e9;
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        const double ramp = std::pow(std::log(1.0 / eps), -gamma * p) / p;
        CHECK(ramp < prev);
        prev = ramp;
    }
    CHECK(prev < 1e-1);
    // gamma = 2/p: both sides converge.
    auto a = optimality_probe(p, 2.0 / p, 1e-5);
    auto b = optimality_probe(p, 2.0 / p, 1e-6);
    CHECK(std::abs(b.lhs - a.lhs) / b.lhs < 0.01);
    CHECK(std::abs(b.rhs - a.rhs) / b.rhs < 0.01);
    CHECK_THROWS_AS(optimality_probe(p, gamma, 0.7), PreconditionError);
    CHECK_THROWS_AS(optimality_probe(p, -1.0, 1e-3), PreconditionError);
}

TEST_CASE("verify_construction: optimal case on a compact window") {
    ProblemParams params(2.0, 3);
    auto dom = RadialDomain::punctured_space();
    auto G = green_radial(params, dom);
    auto [W, v] = hardy_weight_case1(G, params);
    VerifySpec spec;
    spec.base_window = VerificationWindow::global(1e-4, 1e4);
    spec.inner_window = VerificationWindow::near_inner(1e-4, 1e-1);
    spec.outer_window = VerificationWindow::near_outer(1e1, 1e4);
    spec.window_doublings = 1;
    spec.end_widenings = 2;  // widest end window reaches 12 decades
    spec.sequence_indices = {10, 1000};
    spec.grid_nodes = 513;
    auto rep = verify_construction(G, W, v, params, spec);
    // The window value is pinned by the reduced spectral problem.
    const double L = std::log(1e8);
    CHECK(rep.lambda_hat == doctest::Approx(1.0 + 4.0 * kPi * kPi / (L * L)).epsilon(1e-3));
    REQUIRE(rep.global_windows.size() == 2);
    CHECK(rep.global_windows[1].lambda_hat < rep.global_windows[0].lambda_hat);
    REQUIRE(rep.inner_windows.size() == 3);
    CHECK(rep.inner_windows[1].lambda_hat < rep.inner_windows[0].lambda_hat + 1e-10);
    CHECK(rep.null_seq_ok);
    CHECK(rep.mass_ok);
    CHECK_FALSE(rep.consistent_subcritical);
}

TEST_CASE("verify_construction: interpolation weight flags as non-optimal") {
    // p = 4 > n = 2 on the unit ball with alpha = 1/4: the near-end
    // quotients stay above 1.1, consistent with a subcritical functional.
    ProblemParams params(4.0, 2);
    auto dom = RadialDomain::punctured_ball(1.0);
    auto G = green_radial(params, dom);
    auto [W, v] = cor84_weight(G, G.classification().gamma, 0.25, params);
    VerifySpec spec;
    spec.base_window = VerificationWindow::global(1e-6, 1.0 - 1e-6);
    spec.inner_window = VerificationWindow::near_inner(1e-6, 1e-3);
    spec.outer_window = VerificationWindow::near_outer(0.9, 1.0 - 1e-6);
    spec.window_doublings = 0;
    spec.end_widenings = 0;
    spec.sequence_indices = {10, 100};
    spec.grid_nodes = 513;
    spec.band_decades = 3;
    auto rep = verify_construction(G, W, v, params, spec);
    CHECK(rep.consistent_subcritical);
    CHECK(std::min(rep.inner_windows.front().lambda_hat,
                   rep.outer_windows.front().lambda_hat) > 1.1);
    CHECK_FALSE(rep.claims_optimal);
}

TEST_CASE("seeded rng streams are deterministic and decorrelated") {
    auto a1 = detail::seeded_rng(0, 1)();
    auto a2 = detail::seeded_rng(0, 1)();
    auto b = detail::seeded_rng(0, 2)();
    CHECK(a1 == a2);
    CHECK(a1 != b);
}
