// Command-line front end: config ingestion, experiment orchestration, and
// report emission. See README.md for the config schemas.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>

#include "hardyopt/commands.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "path to the JSON config")->required();
    cmd->add_option("--out", args.out_dir, "output directory (default: .)");
    cmd->add_option("--seed", args.seed, "RNG seed override")
        ->each([&args](const std::string&) { args.seed_set = true; });
    cmd->add_flag("--quiet", args.quiet, "suppress progress output");
}

int run(const std::string& name, const CommonArgs& args) {
    using hardyopt::json;
    json config;
    {
        std::ifstream in(args.config_path);
        if (!in) {
            std::fprintf(stderr, "error: cannot open config %s\n", args.config_path.c_str());
            return 2;
        }
        try {
            in >> config;
        } catch (const std::exception& e) {
            std::fprintf(stderr, "error: config is not valid JSON: %s\n", e.what());
            return 2;
        }
    }
    std::uint64_t seed = args.seed_set ? args.seed : 0;
    if (!args.seed_set && config.is_object() && config.contains("seed") &&
        config["seed"].is_number())
        seed = config["seed"].get<std::uint64_t>();

    std::filesystem::path out(args.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(out, ec);

    try {
        if (name == "weight") hardyopt::cmd_weight(config, out, seed, args.quiet);
        else if (name == "verify") hardyopt::cmd_verify(config, out, seed, args.quiet);
        else if (name == "null-seq") hardyopt::cmd_nullseq(config, out, seed, args.quiet);
        else if (name == "coarea-check") hardyopt::cmd_coarea(config, out, seed, args.quiet);
        else if (name == "rellich") hardyopt::cmd_rellich(config, out, seed, args.quiet);
        else if (name == "probe-optimality") hardyopt::cmd_probe(config, out, seed, args.quiet);
        else if (name == "energy") hardyopt::cmd_energy(config, out, seed, args.quiet);
    } catch (const hardyopt::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const hardyopt::PreconditionError& e) {
        std::fprintf(stderr, "precondition failed: %s\n", e.what());
        return 3;
    } catch (const hardyopt::ConvergenceError& e) {
        std::fprintf(stderr, "did not converge: %s\n", e.what());
        return 4;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal Hardy- and Rellich-type weight construction and verification"};
    app.require_subcommand(1);

    const char* names[] = {"weight",  "verify",           "null-seq", "coarea-check",
                           "rellich", "probe-optimality", "energy"};
    const char* descs[] = {
        "tabulate a weight and its ground state as (r, W, v)",
        "run the full best-constant / null-sequence / mass report",
        "evaluate the logarithmic cutoff sequence",
        "flux constancy sweep and both coarea identities",
        "second-order inequality check over an analytic bump family",
        "1D inequality probe over an epsilon sweep",
        "energy report for a construction against a cutoff family"};

    CommonArgs args[7];
    CLI::App* subs[7];
    for (int i = 0; i < 7; ++i) {
        subs[i] = app.add_subcommand(names[i], descs[i]);
        add_common(subs[i], args[i]);
    }

    CLI11_PARSE(app, argc, argv);
    for (int i = 0; i < 7; ++i)
        if (subs[i]->parsed()) return run(names[i], args[i]);
    return 2;
}
