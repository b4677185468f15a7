// zeno_main.cpp — command-line entry point.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "zeno/cli.hpp"
#include "zeno/version.hpp"

namespace {

struct Args {
    std::string config_path;
    std::string out;
    std::string format;
    std::string seed;
    unsigned threads = 0;
    bool threads_set = false;
};

unsigned env_threads() {
    const char* env = std::getenv("ZENO_THREADS");
    if (!env) return 0;
    const long n = std::strtol(env, nullptr, 10);
    return n > 0 ? static_cast<unsigned>(n) : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"zeno — two-level quantum Zeno toolkit: spectra, survival "
                 "probabilities, stochastic ensembles, and parameter sweeps"};
    app.set_version_flag("--version", zeno::tool_version);
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> subcommands = {
        {"spectrum", "eigenvalues, exceptional point, and regime report"},
        {"evolve", "propagate the averaged state over a time grid"},
        {"montecarlo", "trajectory-ensemble survival probability"},
        {"sweep-decay", "long-time decay rate vs measurement strength"},
        {"sweep-survival", "survival probability vs time, per variant"},
        {"regions", "brute-force noise-enhancement region scan"},
        {"validate", "check a configuration and exit"},
        {"kraus-check", "verify the detector-derived measurement operators"},
    };

    std::map<std::string, Args> args;
    for (const auto& [name, desc] : subcommands) {
        CLI::App* sub = app.add_subcommand(name, desc);
        Args& a = args[name];
        auto* cfg_opt = sub->add_option("--config", a.config_path, "JSON config file");
        if (name != "kraus-check") cfg_opt->required();
        sub->add_option("--out", a.out, "output file (default: stdout)");
        sub->add_option("--format", a.format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", a.seed, "64-bit master seed");
        sub->add_option("--threads", a.threads, "worker threads (0 = hardware)")
            ->each([&a](const std::string&) { a.threads_set = true; });
    }

    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    const Args& a = args[name];

    std::string config_text = "{\"omega\": 1.0}";
    if (!a.config_path.empty()) {
        std::ifstream file(a.config_path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot read config file '" << a.config_path << "'\n";
            return 1;
        }
        std::ostringstream ss;
        ss << file.rdbuf();
        config_text = ss.str();
    }

    zeno::CliOverrides overrides;
    if (!a.out.empty()) overrides.out = a.out;
    if (!a.format.empty()) {
        overrides.format = a.format == "json" ? zeno::OutputFormat::json
                                              : zeno::OutputFormat::csv;
    }
    if (!a.seed.empty()) {
        try {
            overrides.seed = std::stoull(a.seed);
        } catch (const std::exception&) {
            std::cerr << "error: --seed expects a non-negative integer\n";
            return 1;
        }
    }
    overrides.threads = a.threads_set ? a.threads : env_threads();

    return zeno::dispatch(name, config_text, overrides, std::cout, std::cerr);
}
