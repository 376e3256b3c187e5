#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rcr/config.hpp"
#include "rcr/grid.hpp"
#include "rcr/types.hpp"

namespace rcr {

inline constexpr const char* kManifestSchemaVersion = "1.0";

/// Seeded generator with platform-independent variates (the standard
/// distributions are implementation-defined, which would break byte
/// reproducibility across standard libraries).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal (Box-Muller).
    double normal();
    cplx complex_normal() { return {normal(), normal()}; }
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    PolarizedAmplitude amplitude(std::size_t points);

private:
    std::mt19937_64 engine_;
};

enum class CheckStatus { pass, fail, skipped, info };

/// One measured quantity. `comparison` is "<", ">" or "==" against
/// `threshold`; skipped and informational checks never gate.
struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::pass;
    double value = 0.0;
    double threshold = 0.0;
    std::string comparison = "<";
    std::string detail;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<CheckResult> checks;
    /// Derived numbers worth recording (fit slopes, counts).
    std::map<std::string, double> summary;
    std::vector<std::string> artifacts;

    bool passed() const;
    std::vector<CheckResult> failures() const;
};

const char* to_string(CheckStatus s);

/// Each runner writes its CSV artifacts and manifest.json into `dir`
/// (created if needed) and returns the report.
ExperimentReport run_theorem1(const ExperimentConfig& config, const std::filesystem::path& dir);
ExperimentReport run_radiation(const ExperimentConfig& config, const std::filesystem::path& dir);
ExperimentReport run_poisson(const ExperimentConfig& config, const std::filesystem::path& dir);
ExperimentReport run_covariance(const ExperimentConfig& config, const std::filesystem::path& dir);
ExperimentReport run_fields(const ExperimentConfig& config, const std::filesystem::path& dir);

/// CCR, centrality, m = 1 N-independence and displacement checks, then every
/// other runner in its own subdirectory. Writes manifest.json and
/// failures.json into `dir`.
ExperimentReport run_suite(const ExperimentConfig& config, const std::filesystem::path& dir);

void write_manifest(const ExperimentReport& report, const ExperimentConfig& config,
                    const std::filesystem::path& dir);

}  // namespace rcr
