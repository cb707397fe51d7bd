#pragma once

// CLI command implementations. Each command takes a strict JSON config
// (unknown keys are rejected), runs library operations, and writes a
// machine-readable report.json plus CSV sidecars into the output directory.
// Exit-code contract (enforced by the binary): 0 success, 2 config error,
// 3 precondition failure, 4 numerical non-convergence.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hardyopt/calculus.hpp"
#include "hardyopt/domain.hpp"
#include "hardyopt/energy.hpp"
#include "hardyopt/io.hpp"
#include "hardyopt/optimality.hpp"
#include "hardyopt/rellich.hpp"
#include "hardyopt/weights.hpp"

namespace hardyopt {

inline constexpr int kSchemaVersion = 1;

// Strict view over a JSON object: every key must be consumed.
class ConfigView {
public:
    explicit ConfigView(const json& j, std::string path = "config") : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + " must be a JSON object");
    }
    ~ConfigView() = default;

    const json& require(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) throw ConfigError(path_ + ": missing required key '" + key + "'");
        return *it;
    }
    const json* optional(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }
    double number(const std::string& key) {
        const json& v = require(key);
        if (!v.is_number()) throw ConfigError(path_ + "." + key + " must be a number");
        return v.get<double>();
    }
    double number_or(const std::string& key, double fallback) {
        const json* v = optional(key);
        if (!v) return fallback;
        if (!v->is_number()) throw ConfigError(path_ + "." + key + " must be a number");
        return v->get<double>();
    }
    std::string text(const std::string& key) {
        const json& v = require(key);
        if (!v.is_string()) throw ConfigError(path_ + "." + key + " must be a string");
        return v.get<std::string>();
    }
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

// ---------------------------------------------------------------------------
// Shared construction parsing.

struct ConstructionBundle {
    ProblemParams params{2.0, 2};
    RadialDomain dom;
    GreenProfile G = GreenProfile::power(1.0, 1.0, RadialDomain::punctured_space(),
                                         Classification::a8_gamma0());
    Weight W = Weight([](double) { return 0.0; }, {}, std::nullopt, false);
    GroundState v = GroundState([](double) { return 1.0; }, [](double) { return 0.0; },
                                [](double) { return 0.0; }, {},
                                RadialDomain::punctured_space(),
                                [](double, double) { return LevelSet{}; }, 1.0, true);
    std::string name;
};

inline RadialDomain parse_domain(const json& j) {
    ConfigView d(j, "config.domain");
    const std::string kind = d.text("kind");
    RadialDomain dom;
    if (kind == "punctured_space") {
        dom = RadialDomain::punctured_space();
    } else if (kind == "punctured_ball") {
        dom = RadialDomain::punctured_ball(d.number("R"));
    } else if (kind == "annulus") {
        dom = RadialDomain::annulus(d.number("r1"), d.number("r2"));
    } else if (kind == "exterior") {
        dom = RadialDomain::exterior(d.number("R"));
    } else {
        throw ConfigError("config.domain.kind: unknown domain '" + kind + "'");
    }
    d.finish();
    return dom;
}

inline ConstructionBundle make_construction(ConfigView& cfg) {
    ConstructionBundle b;
    const double p = cfg.number("p");
    const double n_raw = cfg.number("n");
    if (n_raw != std::floor(n_raw)) throw ConfigError("config.n must be an integer");
    try {
        b.params = ProblemParams(p, static_cast<int>(n_raw));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    b.dom = parse_domain(cfg.require("domain"));
    b.name = cfg.text("construction");
    if (const json* pj = cfg.optional("profile"))
        b.G = profile_from_spec(*pj, b.params, b.dom);
    else
        b.G = green_radial(b.params, b.dom);
    const double q = (b.params.p - 1.0) / b.params.p;
    const double alpha = cfg.number_or("alpha", q);

    if (b.name == "case1") {
        auto [W, v] = hardy_weight_case1(b.G, b.params);
        b.W = std::move(W);
        b.v = std::move(v);
    } else if (b.name == "case2") {
        const double gamma = b.G.classification().gamma;
        auto [W, v] = hardy_weight_case2(b.G, gamma, b.params);
        b.W = std::move(W);
        b.v = std::move(v);
    } else if (b.name == "alpha") {
        auto [W, v] = hardy_weight_alpha(b.G, alpha, b.params);
        b.W = std::move(W);
        b.v = std::move(v);
    } else if (b.name == "two_ends") {
        const auto& cls = b.G.classification();
        auto [W, v] = hardy_weight_two_ends(b.G, cls.m, cls.M, alpha, b.params);
        b.W = std::move(W);
        b.v = std::move(v);
    } else if (b.name == "two_ends_unbounded") {
        const ExtReal in = b.G.limit_inner(), out = b.G.limit_outer();
        const double m = std::min(in.is_infinite() ? std::numeric_limits<double>::infinity()
                                                   : in.value(),
                                  out.is_infinite() ? std::numeric_limits<double>::infinity()
                                                    : out.value());
        auto [W, v] = hardy_weight_two_ends(b.G, m, std::numeric_limits<double>::infinity(),
                                            alpha, b.params);
        b.W = std::move(W);
        b.v = std::move(v);
    } else if (b.name == "g_blend") {
        const double gamma = b.G.classification().gamma;
        auto [W, v] = cor84_weight(b.G, gamma, alpha, b.params);
        b.W = std::move(W);
        b.v = std::move(v);
    } else if (b.name == "quotient") {
        const double gamma = b.G.classification().gamma;
        auto [W, v] = eq85_weight(b.G, gamma, b.params);
        b.W = std::move(W);
        b.v = std::move(v);
    } else {
        throw ConfigError("config.construction: unknown construction '" + b.name + "'");
    }
    return b;
}

struct GridSpec {
    double r_lo = 0.0;
    double r_hi = 0.0;
    std::size_t nodes = 4096;
};

inline GridSpec parse_grid(const json& j, const RadialDomain& dom, double default_nodes = 4096) {
    ConfigView g(j, "config.grid");
    GridSpec spec;
    auto [lo_def, hi_def] = dom.sample_range();
    spec.r_lo = g.number_or("r_lo", lo_def);
    spec.r_hi = g.number_or("r_hi", hi_def);
    const double nodes = g.number_or("nodes", default_nodes);
    if (nodes < 17 || nodes != std::floor(nodes))
        throw ConfigError("config.grid.nodes must be an integer >= 17");
    spec.nodes = static_cast<std::size_t>(nodes);
    g.finish();
    if (!(spec.r_lo > 0.0) || !(spec.r_hi > spec.r_lo))
        throw ConfigError("config.grid requires 0 < r_lo < r_hi");
    if (!dom.contains(spec.r_lo) || !dom.contains(spec.r_hi))
        throw ConfigError("config.grid must lie inside the open domain");
    return spec;
}

inline json run_header(const std::string& command, std::uint64_t seed) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["seed"] = seed;
    return j;
}

// ---------------------------------------------------------------------------
// weight: tabulate (r, W, v).

inline void cmd_weight(const json& config, const std::filesystem::path& out,
                       std::uint64_t seed, bool quiet) {
    ConfigView cfg(config, "config");
    cfg.optional("schema_version");
    auto bundle = make_construction(cfg);
    GridSpec grid = parse_grid(cfg.optional("grid") ? *cfg.optional("grid") : json::object(),
                               bundle.dom, 257);
    cfg.finish();

    std::vector<double> radii;
    const double a = std::log(grid.r_lo), b = std::log(grid.r_hi);
    for (std::size_t i = 0; i < grid.nodes; ++i)
        radii.push_back(std::exp(a + (b - a) * static_cast<double>(i) /
                                         static_cast<double>(grid.nodes - 1)));
    // Two-ends style weights vanish where G = (m + M) / 2; include that radius.
    const auto kind = bundle.W.tag().kind;
    if (kind == WeightKind::Case2 || kind == WeightKind::Eq85 ||
        kind == WeightKind::TwoEndsBounded) {
        const double mid = 0.5 * (bundle.W.tag().m + bundle.W.tag().M);
        const double r_star = bundle.G.inverse(mid);
        if (r_star > grid.r_lo && r_star < grid.r_hi) radii.push_back(r_star);
        std::sort(radii.begin(), radii.end());
    }
    std::vector<std::vector<double>> rows;
    for (double r : radii) rows.push_back({r, bundle.W(r), bundle.v.value(r)});
    write_csv(out / "weight.csv", {"r", "W", "v"}, rows);

    json rep = run_header("weight", seed);
    rep["construction"] = weight_descriptor_json(bundle.W, bundle.params);
    rep["profile"] = profile_json(bundle.G);
    rep["rows"] = rows.size();
    atomic_write(out / "weight.json", rep.dump(2) + "\n");
    if (!quiet) std::printf("wrote %s\n", (out / "weight.csv").string().c_str());
}

// ---------------------------------------------------------------------------
// verify: full optimality report.

inline void cmd_verify(const json& config, const std::filesystem::path& out,
                       std::uint64_t seed, bool quiet) {
    ConfigView cfg(config, "config");
    cfg.optional("schema_version");
    cfg.optional("seed");
    auto bundle = make_construction(cfg);
    GridSpec grid = parse_grid(cfg.optional("grid") ? *cfg.optional("grid") : json::object(),
                               bundle.dom);

    VerifySpec spec;
    spec.seed = seed;
    spec.grid_nodes = grid.nodes;
    spec.base_window = VerificationWindow::global(grid.r_lo, grid.r_hi);
    // Default end windows: the first/last third of the base window in log r.
    const double la = std::log(grid.r_lo), lb = std::log(grid.r_hi);
    spec.inner_window =
        VerificationWindow::near_inner(grid.r_lo, std::exp(la + (lb - la) / 3.0));
    spec.outer_window =
        VerificationWindow::near_outer(std::exp(lb - (lb - la) / 3.0), grid.r_hi);
    if (const json* w = cfg.optional("windows")) {
        ConfigView wv(*w, "config.windows");
        if (const json* gw = wv.optional("global")) {
            spec.base_window = VerificationWindow::global((*gw).at(0).get<double>(),
                                                          (*gw).at(1).get<double>());
        }
        if (const json* iw = wv.optional("inner"))
            spec.inner_window = VerificationWindow::near_inner((*iw).at(0).get<double>(),
                                                               (*iw).at(1).get<double>());
        if (const json* ow = wv.optional("outer"))
            spec.outer_window = VerificationWindow::near_outer((*ow).at(0).get<double>(),
                                                               (*ow).at(1).get<double>());
        wv.finish();
    }
    spec.window_doublings = static_cast<int>(cfg.number_or("doublings", 3));
    spec.end_widenings = static_cast<int>(cfg.number_or("widenings", 2));
    if (const json* si = cfg.optional("sequence_indices")) {
        spec.sequence_indices.clear();
        for (const auto& v : *si) spec.sequence_indices.push_back(v.get<int>());
    }
    spec.band_decades = static_cast<int>(cfg.number_or("band_decades", 6));
    cfg.finish();

    OptimalityReport rep = verify_construction(bundle.G, bundle.W, bundle.v, bundle.params, spec);

    std::vector<std::vector<double>> lam_rows;
    auto push_series = [&](const std::vector<WindowSeries>& s, double tag) {
        for (const auto& e : s)
            lam_rows.push_back({tag, e.window.r_lo, e.window.r_hi, e.lambda_hat});
    };
    push_series(rep.global_windows, 0);
    push_series(rep.inner_windows, 1);
    push_series(rep.outer_windows, 2);
    write_csv(out / "lambda_vs_window.csv", {"window_tag", "r_lo", "r_hi", "lambda_hat"},
              lam_rows);

    std::vector<std::vector<double>> seq_rows;
    for (const auto& row : rep.null_seq)
        seq_rows.push_back({static_cast<double>(row.index), row.X, row.Y, row.Qsim,
                            row.localization, row.normalized_energy});
    write_csv(out / "null_sequence.csv",
              {"n", "X", "Y", "Qsim", "localization", "normalized_energy"}, seq_rows);

    std::vector<std::vector<double>> mass_rows;
    for (const auto& row : rep.mass_divergence)
        mass_rows.push_back({row.t_minus, row.t_plus, row.mass});
    write_csv(out / "mass_vs_band.csv", {"t_minus", "t_plus", "mass"}, mass_rows);

    if (!rep.minimizer_nodes.empty()) {
        std::vector<std::vector<double>> min_rows;
        for (std::size_t i = 0; i < rep.minimizer_nodes.size(); ++i)
            min_rows.push_back({rep.minimizer_nodes[i], rep.minimizer_values[i]});
        write_csv(out / "minimizer.csv", {"r", "phi"}, min_rows);
    }

    json j = run_header("verify", seed);
    j["construction"] = weight_descriptor_json(bundle.W, bundle.params);
    j["profile"] = profile_json(bundle.G);
    j["lambda_hat"] = rep.lambda_hat;
    auto series_json = [](const std::vector<WindowSeries>& s) {
        json arr = json::array();
        for (const auto& e : s)
            arr.push_back({{"r_lo", e.window.r_lo},
                           {"r_hi", e.window.r_hi},
                           {"lambda_hat", e.lambda_hat}});
        return arr;
    };
    j["global_windows"] = series_json(rep.global_windows);
    j["inner_windows"] = series_json(rep.inner_windows);
    j["outer_windows"] = series_json(rep.outer_windows);
    json seq = json::array();
    for (const auto& row : rep.null_seq)
        seq.push_back({{"n", row.index},
                       {"X", row.X},
                       {"Y", row.Y},
                       {"Qsim", row.Qsim},
                       {"localization", row.localization},
                       {"normalized_energy", row.normalized_energy}});
    j["null_sequence"] = seq;
    json mass = json::array();
    for (const auto& row : rep.mass_divergence)
        mass.push_back({{"t_minus", row.t_minus}, {"t_plus", row.t_plus}, {"mass", row.mass}});
    j["mass_divergence"] = mass;
    j["flags"] = {{"best_constant_ok", rep.best_constant_ok},
                  {"end_windows_ok", rep.end_windows_ok},
                  {"null_seq_ok", rep.null_seq_ok},
                  {"mass_ok", rep.mass_ok},
                  {"consistent_subcritical", rep.consistent_subcritical}};
    atomic_write(out / "report.json", j.dump(2) + "\n");
    if (!quiet)
        std::printf("lambda_hat=%s  (report at %s)\n", format_double(rep.lambda_hat).c_str(),
                    (out / "report.json").string().c_str());
}

// ---------------------------------------------------------------------------
// null-seq.

inline void cmd_nullseq(const json& config, const std::filesystem::path& out,
                        std::uint64_t seed, bool quiet) {
    ConfigView cfg(config, "config");
    cfg.optional("schema_version");
    cfg.optional("seed");
    auto bundle = make_construction(cfg);
    GridSpec grid = parse_grid(cfg.optional("grid") ? *cfg.optional("grid") : json::object(),
                               bundle.dom, 512);
    std::vector<int> indices = {10, 100, 1000};
    if (const json* si = cfg.optional("sequence_indices")) {
        indices.clear();
        for (const auto& v : *si) indices.push_back(v.get<int>());
    }
    cfg.finish();

    RadialGrid rg = RadialGrid::log_spaced(bundle.params, bundle.dom, grid.r_lo, grid.r_hi,
                                           grid.nodes);
    std::vector<std::vector<double>> rows;
    json arr = json::array();
    for (int n : indices) {
        auto row = null_sequence(bundle.v, n, rg);
        rows.push_back({static_cast<double>(n), row.X, row.Y, row.Qsim, row.localization,
                        row.normalized_energy});
        arr.push_back({{"n", n},
                       {"X", row.X},
                       {"Y", row.Y},
                       {"Qsim", row.Qsim},
                       {"localization", row.localization},
                       {"normalized_energy", row.normalized_energy}});
    }
    write_csv(out / "null_sequence.csv",
              {"n", "X", "Y", "Qsim", "localization", "normalized_energy"}, rows);
    json j = run_header("null-seq", seed);
    j["construction"] = weight_descriptor_json(bundle.W, bundle.params);
    j["rows"] = arr;
    atomic_write(out / "report.json", j.dump(2) + "\n");
    if (!quiet) std::printf("wrote %s\n", (out / "null_sequence.csv").string().c_str());
}

// ---------------------------------------------------------------------------
// coarea-check: flux sweep plus both reduction identities.

inline void cmd_coarea(const json& config, const std::filesystem::path& out,
                       std::uint64_t seed, bool quiet) {
    ConfigView cfg(config, "config");
    cfg.optional("schema_version");
    const double p = cfg.number("p");
    const double n_raw = cfg.number("n");
    ProblemParams params(p, static_cast<int>(n_raw));
    RadialDomain dom = parse_domain(cfg.require("domain"));
    const int levels = static_cast<int>(cfg.number_or("levels", 20));
    const int integrands = static_cast<int>(cfg.number_or("integrands", 5));
    cfg.finish();

    GreenProfile G = green_radial(params, dom);
    // Level range strictly inside the end limits and mapped to representable
    // radii: evaluate G at the sampling range endpoints.
    const auto [r_lo_s, r_hi_s] = dom.sample_range();
    const double g_a = G.value(r_lo_s), g_b = G.value(r_hi_s);
    const double t_lo = std::min(g_a, g_b);
    const double t_hi = std::max(g_a, g_b);

    std::vector<std::vector<double>> flux_rows;
    for (int i = 0; i < levels; ++i) {
        const double t = t_lo * std::pow(t_hi / t_lo, (i + 0.5) / levels);
        flux_rows.push_back({t, flux(G, t, params)});
    }
    write_csv(out / "flux.csv", {"t", "flux"}, flux_rows);

    const double q = (params.p - 1.0) / params.p;
    const double v_lo = std::pow(t_lo, q), v_hi = std::pow(t_hi, q);
    std::vector<std::vector<double>> co_rows;
    for (int k = 0; k < integrands; ++k) {
        // Smooth bumps (1 - u^2)^2 on nested sub-ranges of (v_lo, v_hi) in log v.
        const double c0 = std::log(v_lo), c1 = std::log(v_hi);
        const double mid = c0 + (c1 - c0) * (k + 1.0) / (integrands + 1.0);
        const double half = 0.35 * (c1 - c0) / 2.0;
        SupportedScalar f{[mid, half](double tau) {
                              const double u = (std::log(tau) - mid) / half;
                              if (std::abs(u) >= 1.0) return 0.0;
                              const double w = 1.0 - u * u;
                              return w * w;
                          },
                          std::exp(mid - half), std::exp(mid + half)};
        auto rep = coarea_reduce(f, G, params);
        co_rows.push_back({static_cast<double>(k), rep.lhs, rep.rhs, rep.lhs2, rep.rhs2,
                           rep.c, rep.c_tilde});
    }
    write_csv(out / "coarea.csv", {"integrand", "lhs", "rhs", "lhs2", "rhs2", "c", "c_tilde"},
              co_rows);

    double mean = 0.0;
    for (const auto& row : flux_rows) mean += row[1];
    mean /= flux_rows.size();
    double var = 0.0;
    for (const auto& row : flux_rows) var += (row[1] - mean) * (row[1] - mean);
    const double rel_std = std::sqrt(var / flux_rows.size()) / mean;

    json j = run_header("coarea-check", seed);
    j["profile"] = profile_json(G);
    j["flux_mean"] = mean;
    j["flux_rel_std"] = rel_std;
    j["c"] = co_rows.empty() ? 0.0 : co_rows.front()[5];
    j["c_tilde"] = co_rows.empty() ? 0.0 : co_rows.front()[6];
    atomic_write(out / "report.json", j.dump(2) + "\n");
    if (!quiet)
        std::printf("flux rel std = %s\n", format_double(rel_std).c_str());
}

// ---------------------------------------------------------------------------
// rellich.

inline void cmd_rellich(const json& config, const std::filesystem::path& out,
                        std::uint64_t seed, bool quiet) {
    ConfigView cfg(config, "config");
    cfg.optional("schema_version");
    cfg.optional("seed");
    const double p = cfg.number("p");
    const double n_raw = cfg.number("n");
    ProblemParams params(p, static_cast<int>(n_raw));
    const double alpha = cfg.number("alpha");
    const json& v0j = cfg.require("v0");
    ConfigView v0v(v0j, "config.v0");
    const std::string type = v0v.text("type");
    if (type != "power") throw ConfigError("config.v0.type: only 'power' profiles are supported");
    const double expo = v0v.number("exponent");
    v0v.finish();
    const int family_size = static_cast<int>(cfg.number_or("family_size", 100));
    const double t0_lo = std::log(cfg.number_or("center_lo", 1e-2));
    const double t0_hi = std::log(cfg.number_or("center_hi", 1e2));
    cfg.finish();

    auto v0 = RadialFunction::power(expo);
    auto triple = rellich_weights(v0, alpha, params, 1e-6, 1e6);
    auto family = random_bump_family(static_cast<std::size_t>(family_size), seed, t0_lo, t0_hi);
    auto check = rellich_check(triple, family, params);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < check.ratios.size(); ++i)
        rows.push_back({static_cast<double>(i), check.ratios[i]});
    write_csv(out / "ratios.csv", {"id", "ratio"}, rows);

    json j = run_header("rellich", seed);
    j["constant"] = triple.constant;
    j["min_ratio"] = check.min_ratio;
    j["argmin_id"] = check.argmin;
    j["family_size"] = family_size;
    atomic_write(out / "report.json", j.dump(2) + "\n");
    if (!quiet)
        std::printf("constant=%s min_ratio=%s\n", format_double(triple.constant).c_str(),
                    format_double(check.min_ratio).c_str());
}

// ---------------------------------------------------------------------------
// probe-optimality: eps sweep of the 1D inequality probe.

inline void cmd_probe(const json& config, const std::filesystem::path& out,
                      std::uint64_t seed, bool quiet) {
    ConfigView cfg(config, "config");
    cfg.optional("schema_version");
    const double p = cfg.number("p");
    if (!(p > 1.0)) throw ConfigError("config.p must exceed 1");
    double gamma;
    const json& gj = cfg.require("gamma");
    if (gj.is_string()) {
        const std::string s = gj.get<std::string>();
        if (s == "1/p") gamma = 1.0 / p;
        else if (s == "2/p") gamma = 2.0 / p;
        else throw ConfigError("config.gamma: expected a number, '1/p' or '2/p'");
    } else if (gj.is_number()) {
        gamma = gj.get<double>();
    } else {
        throw ConfigError("config.gamma: expected a number, '1/p' or '2/p'");
    }
    std::vector<double> eps_list;
    if (const json* el = cfg.optional("eps_list")) {
        for (const auto& v : *el) eps_list.push_back(v.get<double>());
    } else {
        const int decades = static_cast<int>(cfg.number_or("eps_decades", 5));
        for (int k = 0; k < decades; ++k) eps_list.push_back(std::pow(10.0, -2 - k));
    }
    cfg.finish();

    std::vector<std::vector<double>> rows;
    json arr = json::array();
    for (double eps : eps_list) {
        auto res = optimality_probe(p, gamma, eps);
        rows.push_back({eps, res.lhs, res.rhs, res.ratio()});
        arr.push_back({{"eps", eps}, {"lhs", res.lhs}, {"rhs", res.rhs}, {"ratio", res.ratio()}});
    }
    write_csv(out / "probe.csv", {"eps", "lhs", "rhs", "ratio"}, rows);
    json j = run_header("probe-optimality", seed);
    j["p"] = p;
    j["gamma"] = gamma;
    j["rows"] = arr;
    atomic_write(out / "report.json", j.dump(2) + "\n");
    if (!quiet && !rows.empty())
        std::printf("ratio(eps=%s) = %s\n", format_double(rows.back()[0]).c_str(),
                    format_double(rows.back()[3]).c_str());
}

// ---------------------------------------------------------------------------
// energy: evaluate a construction against a test-function family.

inline void cmd_energy(const json& config, const std::filesystem::path& out,
                       std::uint64_t seed, bool quiet) {
    ConfigView cfg(config, "config");
    cfg.optional("schema_version");
    auto bundle = make_construction(cfg);
    GridSpec grid = parse_grid(cfg.optional("grid") ? *cfg.optional("grid") : json::object(),
                               bundle.dom, 1024);
    std::vector<int> indices = {10, 100, 1000};
    std::string family = "log_cutoff";
    if (const json* fj = cfg.optional("family")) {
        ConfigView fv(*fj, "config.family");
        family = fv.text("type");
        if (const json* fi = fv.optional("indices")) {
            indices.clear();
            for (const auto& v : *fi) indices.push_back(v.get<int>());
        }
        fv.finish();
    }
    if (family != "log_cutoff")
        throw ConfigError("config.family.type: only 'log_cutoff' is supported");
    cfg.finish();

    RadialGrid rg = RadialGrid::log_spaced(bundle.params, bundle.dom, grid.r_lo, grid.r_hi,
                                           grid.nodes);
    std::vector<std::vector<double>> rows;
    for (int n : indices) {
        // phi = v * phi_n(v), nodally interpolated.
        detail::LogCutoff cut{static_cast<double>(n), bundle.v.has_unbounded_end()};
        TestFunction phi = TestFunction::sample(rg, [&](double r) {
            const double vv = bundle.v.value(r);
            return vv * cut.value(vv);
        });
        TestFunction w = TestFunction::sample(rg, [&](double r) {
            return cut.value(bundle.v.value(r));
        });
        EnergyReport rep = energy_QV(phi, nullptr);
        auto xy = xy_split(w, bundle.v);
        rep.X = xy.X;
        rep.Y = xy.Y;
        rep.Qsim = xy.Qsim;
        rep.rhs = weighted_p_mass(phi, bundle.W);
        rep.rayleigh = rep.rhs > 0.0 ? rep.Q / rep.rhs : 0.0;
        rows.push_back({static_cast<double>(n), rep.Q, rep.gradient_term, rep.potential_term,
                        rep.X, rep.Y, rep.Qsim, rep.rhs, rep.rayleigh});
    }
    write_csv(out / "energy.csv",
              {"n", "Q", "gradient_term", "potential_term", "X", "Y", "Qsim", "rhs", "rayleigh"},
              rows);
    json j = run_header("energy", seed);
    j["construction"] = weight_descriptor_json(bundle.W, bundle.params);
    j["rows"] = rows.size();
    atomic_write(out / "report.json", j.dump(2) + "\n");
    if (!quiet) std::printf("wrote %s\n", (out / "energy.csv").string().c_str());
}

}  // namespace hardyopt
