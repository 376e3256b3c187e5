#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "rcr/grid.hpp"
#include "rcr/radiation.hpp"

namespace rcr {

struct Theorem1Config {
    int m = 2;
    int m_prime = 2;
    std::vector<std::int64_t> limit_N{4, 8, 16, 32, 64};
    std::vector<int> bruteforce_m{1, 2, 3};
    std::vector<std::int64_t> bruteforce_N{1, 2, 3, 4};
    int bruteforce_points = 3;
};

struct RadiationConfig {
    int shells = 64;
    double k_min = 0.1;
    int halvings = 6;
    /// Explicit list; replaces k_min/halvings when present.
    std::optional<std::vector<double>> k_mins;
    CurrentTemplate current;
    int conjugation_n_max = 3;
    double conjugation_amplitude = 0.01;
};

struct PoissonConfig {
    double lambda = 0.8;
    std::vector<std::int64_t> N{8, 16, 32};
    int n_max = 8;
};

struct CovarianceConfig {
    GridSpec grid{1.0, 2.0, 1, 2, 4, 0.5};
    int n_max = 2;
    int translations = 5;
    int cocycle_pairs = 50;
};

struct FieldsConfig {
    int profiles = 10;
    int dense_n_max = 12;
    int scan_points = 41;
    double scan_t_max = 10.0;
};

struct SuiteConfig {
    int ccr_trials = 20;
    int displacement_n_max = 6;
    /// Replaces every residual tolerance when set.
    std::optional<double> tolerance;
};

struct ExperimentConfig {
    std::uint64_t seed = 20240601;
    std::string output_dir = "out";
    GridSpec grid;
    ProfileTemplate profile;
    /// Fock truncation of the dense brute-force path; empty means n_max = m
    /// for each case, the smallest exact choice.
    std::optional<int> n_max;
    Theorem1Config theorem1;
    RadiationConfig radiation;
    PoissonConfig poisson;
    CovarianceConfig covariance;
    FieldsConfig fields;
    SuiteConfig suite;
};

/// INI-style key = value text; sections as in configs/default.ini. Unknown
/// sections or keys, malformed numbers and out-of-range values raise ConfigError.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Canonical key/value listing (section.key -> text) used in manifests.
std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& config);

}  // namespace rcr
