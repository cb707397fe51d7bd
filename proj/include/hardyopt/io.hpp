#pragma once

// JSON/CSV emission helpers. Reports are deterministic for a fixed config and
// seed: CSV floats carry 17 significant digits, files are written atomically
// (temp file + rename), and JSON objects keep nlohmann's sorted key order.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hardyopt/calculus.hpp"
#include "hardyopt/common.hpp"
#include "hardyopt/domain.hpp"
#include "hardyopt/weights.hpp"

namespace hardyopt {

using json = nlohmann::json;

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

inline void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    atomic_write(path, out);
}

inline json domain_json(const RadialDomain& dom) {
    json j;
    j["kind"] = dom.name();
    switch (dom.kind) {
        case DomainKind::PuncturedBall: j["R"] = dom.r2; break;
        case DomainKind::Exterior: j["R"] = dom.r1; break;
        case DomainKind::Annulus:
            j["r1"] = dom.r1;
            j["r2"] = dom.r2;
            break;
        default: break;
    }
    return j;
}

inline json classification_json(const Classification& c) {
    json j;
    j["kind"] = c.name();
    if (c.kind == Classification::Kind::A8GammaPos) j["gamma"] = c.gamma;
    if (c.kind == Classification::Kind::TwoEnds) {
        j["m"] = c.m;
        j["M"] = c.M;
    }
    return j;
}

inline json profile_json(const GreenProfile& G) {
    json j;
    switch (G.form()) {
        case GreenProfile::Form::Power:
            j["form"] = "power";
            j["params"] = {{"a", G.power_exponent()}, {"scale", G.scale()}};
            break;
        case GreenProfile::Form::PowerShift:
            j["form"] = "power_shift";
            j["params"] = {{"a", G.power_exponent()}, {"c", G.shift()}, {"scale", G.scale()}};
            break;
        case GreenProfile::Form::Log:
            j["form"] = "log";
            j["params"] = {{"R", G.log_radius()}, {"scale", G.scale()}};
            break;
        case GreenProfile::Form::Custom: j["form"] = "custom"; break;
    }
    j["domain"] = domain_json(G.domain());
    j["classification"] = classification_json(G.classification());
    return j;
}

// Round trip for catalog profiles.
inline GreenProfile profile_from_json(const json& j, const ProblemParams& params) {
    const std::string kind = j.at("domain").at("kind").get<std::string>();
    RadialDomain dom;
    if (kind == "punctured_space") {
        dom = RadialDomain::punctured_space();
    } else if (kind == "punctured_ball") {
        dom = RadialDomain::punctured_ball(j.at("domain").at("R").get<double>());
    } else if (kind == "annulus") {
        dom = RadialDomain::annulus(j.at("domain").at("r1").get<double>(),
                                    j.at("domain").at("r2").get<double>());
    } else if (kind == "exterior") {
        dom = RadialDomain::exterior(j.at("domain").at("R").get<double>());
    } else {
        throw ConfigError("unknown domain kind: " + kind);
    }
    (void)params;
    const std::string form = j.at("form").get<std::string>();
    const json& cj = j.at("classification");
    Classification cls;
    const std::string ck = cj.at("kind").get<std::string>();
    if (ck == "A7") cls = Classification::a7();
    else if (ck == "A8Gamma0") cls = Classification::a8_gamma0();
    else if (ck == "A8GammaPos") cls = Classification::a8_gamma(cj.at("gamma").get<double>());
    else if (ck == "TwoEnds")
        cls = Classification::two_ends(cj.at("m").get<double>(), cj.at("M").get<double>());
    else
        throw ConfigError("unknown classification kind: " + ck);
    if (form == "power")
        return GreenProfile::power(j.at("params").at("a").get<double>(),
                                   j.at("params").at("scale").get<double>(), dom, cls);
    if (form == "power_shift")
        return GreenProfile::power_shift(j.at("params").at("a").get<double>(),
                                         j.at("params").at("c").get<double>(),
                                         j.at("params").at("scale").get<double>(), dom, cls);
    if (form == "log")
        return GreenProfile::log_profile(j.at("params").at("R").get<double>(),
                                         j.at("params").at("scale").get<double>(), dom, cls);
    throw ConfigError("unknown profile form: " + form);
}

// Classification inferred from end limits and (p, n).
inline Classification infer_classification(ExtReal inner, ExtReal outer,
                                           const ProblemParams& params) {
    const bool in_inf = inner.is_infinite(), out_inf = outer.is_infinite();
    if (!in_inf && !out_inf) {
        const double lo = std::min(inner.value(), outer.value());
        const double hi = std::max(inner.value(), outer.value());
        return Classification::two_ends(lo, hi);
    }
    if (params.p > params.n) {
        if (!in_inf && inner.value() > 0.0 && !out_inf && outer.value() == 0.0)
            return Classification::a8_gamma(inner.value());
        return Classification::a8_gamma0();
    }
    return Classification::a7();
}

// Build a profile from a CLI "profile" spec on a given domain; the
// classification is inferred and the p-harmonic residual validated.
inline GreenProfile profile_from_spec(const json& j, const ProblemParams& params,
                                      const RadialDomain& dom, double tol = 1e-8) {
    const std::string form = j.at("form").get<std::string>();
    auto build = [&](const Classification& cls) {
        if (form == "power")
            return GreenProfile::power(j.at("params").at("a").get<double>(),
                                       j.at("params").value("scale", 1.0), dom, cls);
        if (form == "power_shift")
            return GreenProfile::power_shift(j.at("params").at("a").get<double>(),
                                             j.at("params").at("c").get<double>(),
                                             j.at("params").value("scale", 1.0), dom, cls);
        if (form == "log")
            return GreenProfile::log_profile(j.at("params").at("R").get<double>(),
                                             j.at("params").value("scale", 1.0), dom, cls);
        throw ConfigError("unknown profile form: " + form);
    };
    GreenProfile candidate = build(Classification::a7());
    GreenProfile G = build(
        infer_classification(candidate.limit_inner(), candidate.limit_outer(), params));
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

inline json weight_descriptor_json(const Weight& W, const ProblemParams& params) {
    json j;
    j["construction"] = weight_kind_name(W.tag().kind);
    json pj;
    pj["p"] = params.p;
    pj["n"] = params.n;
    pj["alpha"] = W.tag().alpha;
    if (W.tag().kind == WeightKind::Case2 || W.tag().kind == WeightKind::Cor84 ||
        W.tag().kind == WeightKind::Eq85)
        pj["gamma"] = W.tag().gamma;
    if (W.tag().kind == WeightKind::TwoEndsBounded ||
        W.tag().kind == WeightKind::TwoEndsUnbounded) {
        pj["m"] = W.tag().m;
        pj["M"] = std::isfinite(W.tag().M) ? json(W.tag().M) : json("inf");
    }
    j["params"] = pj;
    if (W.expected_lambda0())
        j["expected_lambda0"] = *W.expected_lambda0();
    else
        j["expected_lambda0"] = nullptr;
    j["claims_optimal"] = W.claims_optimal();
    return j;
}

}  // namespace hardyopt
