#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rcr/config.hpp"
#include "rcr/experiments.hpp"
#include "rcr/io.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitUsage = 2;

void print_report(const rcr::ExperimentReport& report) {
    for (const auto& c : report.checks) {
        std::string line = std::string(rcr::to_string(c.status)) + "  " + c.name;
        if (c.status == rcr::CheckStatus::skipped) {
            line += "  (" + c.detail + ")";
        } else {
            line += "  " + rcr::io::format_number(c.value);
            if (!c.comparison.empty())
                line += " " + c.comparison + " " + rcr::io::format_number(c.threshold);
        }
        std::cout << line << '\n';
    }
    std::cout << report.experiment << ": " << (report.passed() ? "PASSED" : "FAILED") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reducible CCR laboratory: experiments with CSV and JSON output"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    app.add_option("-c,--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("-o,--out", out_dir, "output directory (overrides output_dir)");
    app.add_option("--seed", seed, "random seed (overrides seed)");

    struct Command {
        const char* name;
        const char* help;
        rcr::ExperimentReport (*run)(const rcr::ExperimentConfig&, const std::filesystem::path&);
    };
    const Command commands[] = {
        {"theorem1", "finite-N correlators, brute-force oracle and N -> infinity limit", &rcr::run_theorem1},
        {"radiation", "classical-current radiation and the infrared sweep", &rcr::run_radiation},
        {"poisson", "excitation statistics of ensemble coherent states", &rcr::run_poisson},
        {"covariance", "Poincare covariance, Wigner phases and tetrads", &rcr::run_covariance},
        {"fields", "one-photon vectors, two-point products and field averages", &rcr::run_fields},
        {"suite", "every check; writes failures.json", &rcr::run_suite},
    };
    for (const auto& c : commands) app.add_subcommand(c.name, c.help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        rcr::ExperimentConfig config = config_path ? rcr::load_config(*config_path) : rcr::ExperimentConfig{};
        if (out_dir) config.output_dir = *out_dir;
        if (seed) config.seed = *seed;
        for (const auto& c : commands) {
            if (!app.got_subcommand(c.name)) continue;
            const auto report = c.run(config, std::filesystem::path(config.output_dir) / c.name);
            print_report(report);
            return report.passed() ? kExitPass : kExitTolerance;
        }
    } catch (const rcr::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitTolerance;
    }
    return kExitUsage;
}
