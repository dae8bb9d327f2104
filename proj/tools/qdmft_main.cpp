#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdmft/experiments.hpp"

namespace {

int run_mode(const std::string& mode, const std::string& config_path, const std::string& out_dir,
             const qdmft::KeyValues& overrides) {
    qdmft::ExperimentConfig config =
        qdmft::make_experiment_config(mode, config_path, overrides);
    return qdmft::run_experiment(config, out_dir);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Nonequilibrium DMFT with a statevector impurity solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::vector<std::string> sets;
    long seed = -1;
    int workers = 0;

    const std::vector<std::string> modes = {"ed", "hybrid", "eta-sweep", "lindblad-fit"};
    const std::vector<std::string> blurbs = {
        "Classical-solver DMFT quench",
        "Circuit-solver DMFT quench",
        "Decay-rate fits over a gate-noise list at fixed couplings",
        "Damped-bath loop, naive versus dissipative-fit closure",
    };
    for (size_t i = 0; i < modes.size(); ++i) {
        CLI::App* sub = app.add_subcommand(modes[i], blurbs[i]);
        sub->add_option("--config", config_path, "key=value configuration file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "master seed (overrides the config file)");
        sub->add_option("--workers", workers, "worker threads (overrides the config file)");
        sub->add_option("--set", sets, "extra key=value overrides")->take_all();
    }

    CLI11_PARSE(app, argc, argv);

    const std::string mode = app.get_subcommands().front()->get_name();
    try {
        qdmft::KeyValues overrides;
        for (const std::string& kv : sets) {
            size_t eq = kv.find('=');
            if (eq == std::string::npos)
                throw qdmft::ConfigError("--set expects key=value, got '" + kv + "'");
            overrides.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
        }
        if (seed >= 0)
            overrides.emplace_back("seed", std::to_string(seed));
        if (workers > 0)
            overrides.emplace_back("workers", std::to_string(workers));
        return run_mode(mode, config_path, out_dir, overrides);
    } catch (const qdmft::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const qdmft::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
