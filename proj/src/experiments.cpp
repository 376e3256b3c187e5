#include "rcr/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include "json.hpp"

#include "rcr/combinatorics.hpp"
#include "rcr/ensemble.hpp"
#include "rcr/fields.hpp"
#include "rcr/io.hpp"
#include "rcr/oscillator.hpp"
#include "rcr/poincare.hpp"
#include "rcr/radiation.hpp"

namespace rcr {

namespace fs = std::filesystem;

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    const double v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * kPi * v);
}

PolarizedAmplitude Rng::amplitude(std::size_t points) {
    PolarizedAmplitude f(points);
    for (auto& v : f.data()) v = complex_normal();
    return f;
}

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::skipped: return "skipped";
        case CheckStatus::info: return "info";
    }
    return "unknown";
}

bool ExperimentReport::passed() const {
    return std::none_of(checks.begin(), checks.end(),
                        [](const CheckResult& c) { return c.status == CheckStatus::fail; });
}

std::vector<CheckResult> ExperimentReport::failures() const {
    std::vector<CheckResult> out;
    for (const auto& c : checks)
        if (c.status == CheckStatus::fail) out.push_back(c);
    return out;
}

namespace {

// Independent random streams per experiment, so a subcommand produces the
// same artifacts standalone and inside the suite.
enum Stream : std::uint64_t { kTheorem1 = 1, kRadiation, kPoisson, kCovariance, kFields, kSuite };

Rng stream(const ExperimentConfig& c, Stream s) { return Rng(c.seed * 0x9E3779B97F4A7C15ULL + s); }

class Checks {
public:
    Checks(ExperimentReport& report, std::optional<double> override_tol)
        : report_(report), override_(override_tol) {}

    /// value < tolerance; the suite-wide override replaces the tolerance.
    void residual(const std::string& name, double value, double tolerance, std::string detail = {}) {
        const double t = override_.value_or(tolerance);
        push({name, std::isfinite(value) && value < t ? CheckStatus::pass : CheckStatus::fail, value,
              t, "<", std::move(detail)});
    }

    void less(const std::string& name, double value, double bound, std::string detail = {}) {
        push({name, value < bound ? CheckStatus::pass : CheckStatus::fail, value, bound, "<",
              std::move(detail)});
    }

    void greater(const std::string& name, double value, double bound, std::string detail = {}) {
        push({name, value > bound ? CheckStatus::pass : CheckStatus::fail, value, bound, ">",
              std::move(detail)});
    }

    void truth(const std::string& name, bool ok, std::string detail = {}) {
        push({name, ok ? CheckStatus::pass : CheckStatus::fail, ok ? 1.0 : 0.0, 1.0, "==",
              std::move(detail)});
    }

    void skipped(const std::string& name, std::string reason) {
        push({name, CheckStatus::skipped, std::nan(""), std::nan(""), "", std::move(reason)});
    }

    void info(const std::string& name, double value, std::string detail = {}) {
        push({name, CheckStatus::info, value, std::nan(""), "", std::move(detail)});
    }

private:
    void push(CheckResult c) { report_.checks.push_back(std::move(c)); }

    ExperimentReport& report_;
    std::optional<double> override_;
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

std::ofstream open_artifact(ExperimentReport& report, const fs::path& dir, const std::string& name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + (dir / name).string() + "'");
    report.artifacts.push_back(name);
    return out;
}

MomentumGrid small_grid(int points) {
    GridSpec s;
    s.k_min = 0.5;
    s.k_max = 2.0;
    s.radial = points;
    s.polar = 1;
    s.azimuthal = 1;
    return MomentumGrid::build(s);
}

std::vector<PolarizedAmplitude> random_amplitudes(Rng& rng, std::size_t count, std::size_t points) {
    std::vector<PolarizedAmplitude> out;
    for (std::size_t j = 0; j < count; ++j) out.push_back(rng.amplitude(points));
    return out;
}

std::string case_name(int m, std::int64_t N) {
    return "m" + std::to_string(m) + "_N" + std::to_string(N);
}

// ---------------------------------------------------------------- theorem 1

void theorem1_convergence(const ExperimentConfig& c, Rng& rng, const fs::path& dir,
                          ExperimentReport& report, Checks& checks) {
    const auto& t = c.theorem1;
    const MomentumGrid grid = MomentumGrid::build(c.grid);
    const VacuumProfile profile = VacuumProfile::from_template(grid, c.profile);
    const auto fsv = random_amplitudes(rng, t.m, grid.size());
    const auto gsv = t.m == t.m_prime ? fsv : random_amplitudes(rng, t.m_prime, grid.size());

    std::vector<ConvergenceRow> rows;
    if (t.m == t.m_prime) {
        rows = convergence_study(grid, fsv, gsv, profile, t.limit_N);
    } else {
        for (auto N : t.limit_N)
            rows.push_back({N, finite_n_correlator(grid, fsv, gsv, profile, N), cplx{}, 0.0});
    }

    auto out = open_artifact(report, dir, "convergence.csv");
    io::CsvWriter csv(out);
    csv.header({"N", "finite_value_re", "finite_value_im", "limit_re", "limit_im", "abs_error"});
    for (const auto& r : rows)
        csv.row({r.N, r.finite.real(), r.finite.imag(), r.limit.real(), r.limit.imag(), r.abs_error});

    if (t.m != t.m_prime) {
        double worst = 0.0;
        for (const auto& r : rows) worst = std::max(worst, std::abs(r.finite));
        checks.truth("theorem1.mismatched_orders_vanish", worst == 0.0,
                     "m = " + std::to_string(t.m) + ", m' = " + std::to_string(t.m_prime));
        checks.skipped("theorem1.limit_slope", "m != m': correlator vanishes identically");
        return;
    }
    bool fittable = rows.size() >= 2 && t.m >= 1;
    for (const auto& r : rows) fittable = fittable && r.abs_error > 0.0;
    if (!fittable) {
        checks.skipped("theorem1.limit_slope", "need m >= 1, two N values and non-zero errors");
        return;
    }
    const LineFit fit = loglog_fit(rows);
    report.summary["limit_slope"] = fit.slope;
    report.summary["limit_slope_r_squared"] = fit.r_squared;
    checks.less("theorem1.limit_slope", std::abs(fit.slope + 1.0), 0.1,
                "log-log slope " + io::format_number(fit.slope) + " (expected -1 +/- 0.1)");
}

void theorem1_bruteforce(const ExperimentConfig& c, Rng& rng, const fs::path& dir,
                         ExperimentReport& report, Checks& checks) {
    const auto& t = c.theorem1;
    auto out = open_artifact(report, dir, "bruteforce.csv");
    io::CsvWriter csv(out);
    csv.header({"m", "N", "points", "n_max", "partition_re", "partition_im", "dense_re", "dense_im",
                "abs_diff", "status"});
    for (int m : t.bruteforce_m)
        for (auto N : t.bruteforce_N) {
            const std::string name = "theorem1.bruteforce." + case_name(m, N);
            const int n_max = c.n_max.value_or(std::max(m, 1));
            if (n_max < m) {
                const std::string reason = "truncation insufficient: n_max = " +
                                           std::to_string(n_max) + " < m = " + std::to_string(m);
                checks.skipped(name, reason);
                csv.row({std::int64_t(m), N, std::int64_t(0), std::int64_t(n_max), std::nan(""),
                         std::nan(""), std::nan(""), std::nan(""), std::nan(""), "skipped"});
                continue;
            }
            // Largest grid (up to the configured size) whose dense tensor fits the cap.
            int K = t.bruteforce_points;
            const FockTruncation trunc(n_max);
            while (K > 1) {
                try {
                    dense_dimension(std::size_t(K) * trunc.block(), std::size_t(N), kDefaultDenseCap);
                    break;
                } catch (const CapacityError&) {
                    --K;
                }
            }
            const MomentumGrid grid = small_grid(K);
            const VacuumProfile profile = VacuumProfile::from_template(grid, c.profile);
            const auto fsv = random_amplitudes(rng, m, grid.size());
            const auto gsv = random_amplitudes(rng, m, grid.size());
            try {
                const cplx part = finite_n_correlator(grid, fsv, gsv, profile, N);
                const cplx dense =
                    multiphoton_product_bruteforce(grid, fsv, gsv, profile, std::size_t(N), trunc);
                const double diff = std::abs(part - dense);
                checks.residual(name, diff, 1e-10,
                                "K = " + std::to_string(K) + ", n_max = " + std::to_string(n_max));
                csv.row({std::int64_t(m), N, std::int64_t(K), std::int64_t(n_max), part.real(),
                         part.imag(), dense.real(), dense.imag(), diff, "ran"});
            } catch (const CapacityError& e) {
                checks.skipped(name, e.what());
                csv.row({std::int64_t(m), N, std::int64_t(K), std::int64_t(n_max), std::nan(""),
                         std::nan(""), std::nan(""), std::nan(""), std::nan(""), "skipped"});
            }
        }
}

void theorem1_probabilities(const fs::path& dir, ExperimentReport& report, Checks& checks) {
    checks.truth("theorem1.P0_m2_N4_exact", class_probability_exact(2, 4, 0) == Rational(3, 4),
                 "P0(2, 4) = " + class_probability_exact(2, 4, 0).str());
    auto out = open_artifact(report, dir, "class_probabilities.csv");
    io::CsvWriter csv(out);
    csv.header({"m", "N", "j", "P_j", "P_j_exact"});
    int violations = 0;
    for (int m = 1; m <= 6; ++m)
        for (std::int64_t N = 1; N <= 64; ++N) {
            Rational total = 0;
            for (int j = 0; j < m; ++j) {
                const Rational p = class_probability_exact(m, N, j);
                total += p;
                csv.row({std::int64_t(m), N, std::int64_t(j), static_cast<double>(p), p.str()});
            }
            if (total != 1) ++violations;
        }
    checks.truth("theorem1.probability_closure_exact", violations == 0,
                 std::to_string(violations) + " (m, N) pairs with sum_j P_j != 1, m <= 6, N <= 64");
}

void theorem1_two_point(const ExperimentConfig& c, const fs::path& dir, ExperimentReport& report,
                        Checks& checks) {
    const std::array<std::array<double, 3>, 2> momenta{{{0.0, 0.0, 1.0}, {0.0, 0.0, 2.0}}};
    const std::array<double, 2> weights{1.0, 1.0};
    const MomentumGrid grid = MomentumGrid::from_momenta(momenta, weights);
    const VacuumProfile profile =
        VacuumProfile::from_amplitudes(grid, {std::sqrt(0.5), std::sqrt(0.5)});
    PolarizedAmplitude f(2);
    f(0, Helicity::plus) = std::sqrt(2.0);
    const std::vector<PolarizedAmplitude> pair{f, f};

    auto out = open_artifact(report, dir, "two_point_grid.csv");
    io::CsvWriter csv(out);
    csv.header({"N", "partition", "expected", "abs_diff"});
    double worst = 0.0;
    std::vector<std::int64_t> Ns{1, 2};
    for (auto N : c.theorem1.limit_N) Ns.push_back(N);
    std::sort(Ns.begin(), Ns.end());
    Ns.erase(std::unique(Ns.begin(), Ns.end()), Ns.end());
    for (auto N : Ns) {
        const cplx v = finite_n_correlator(grid, pair, pair, profile, N);
        const double expected = 2.0 + 2.0 / double(N);
        worst = std::max(worst, std::abs(v - expected));
        csv.row({N, v.real(), expected, std::abs(v - expected)});
    }
    checks.residual("theorem1.two_point_grid_formula", worst, 1e-10, "partition sum vs 2 + 2/N");
    const cplx dense = multiphoton_product_bruteforce(grid, pair, pair, profile, 2, FockTruncation(2));
    report.summary["two_point_grid_dense_N2"] = dense.real();
    checks.residual("theorem1.two_point_grid_dense_N2", std::abs(dense - 3.0), 1e-10,
                    "dense contraction at N = 2 against 3");
}

// ---------------------------------------------------------------- radiation

std::vector<double> sweep_k_mins(const RadiationConfig& r) {
    if (r.k_mins) return *r.k_mins;
    std::vector<double> k;
    for (int h = 0; h <= r.halvings; ++h) k.push_back(std::ldexp(r.k_min, -h));
    return k;
}

// ---------------------------------------------------------------- manifest

nlohmann::ordered_json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json check_json(const CheckResult& c) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["status"] = to_string(c.status);
    j["value"] = number_or_null(c.value);
    j["threshold"] = number_or_null(c.threshold);
    j["comparison"] = c.comparison;
    j["detail"] = c.detail;
    return j;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << j.dump(2) << '\n';
}

void fold(ExperimentReport& suite, const ExperimentReport& sub) {
    for (auto c : sub.checks) suite.checks.push_back(std::move(c));
    for (const auto& [k, v] : sub.summary) suite.summary[sub.experiment + "." + k] = v;
    for (const auto& a : sub.artifacts) suite.artifacts.push_back(sub.experiment + "/" + a);
}

}  // namespace

void write_manifest(const ExperimentReport& report, const ExperimentConfig& config,
                    const fs::path& dir) {
    nlohmann::ordered_json j;
    j["schema_version"] = kManifestSchemaVersion;
    j["experiment"] = report.experiment;
    j["seed"] = config.seed;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [k, v] : describe(config))
        if (k != "output_dir") cfg[k] = v;
    j["config"] = cfg;
    j["passed"] = report.passed();
    nlohmann::ordered_json summary = nlohmann::ordered_json::object();
    for (const auto& [k, v] : report.summary) summary[k] = number_or_null(v);
    j["summary"] = summary;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const auto& c : report.checks) checks.push_back(check_json(c));
    j["checks"] = checks;
    j["artifacts"] = report.artifacts;
    write_json(dir / "manifest.json", j);
}

ExperimentReport run_theorem1(const ExperimentConfig& config, const fs::path& dir) {
    ensure_dir(dir);
    ExperimentReport report{"theorem1", {}, {}, {}};
    Checks checks(report, config.suite.tolerance);
    Rng rng = stream(config, kTheorem1);
    theorem1_convergence(config, rng, dir, report, checks);
    theorem1_bruteforce(config, rng, dir, report, checks);
    theorem1_probabilities(dir, report, checks);
    theorem1_two_point(config, dir, report, checks);
    write_manifest(report, config, dir);
    return report;
}

ExperimentReport run_radiation(const ExperimentConfig& config, const fs::path& dir) {
    ensure_dir(dir);
    ExperimentReport report{"radiation", {}, {}, {}};
    Checks checks(report, config.suite.tolerance);
    Rng rng = stream(config, kRadiation);
    const auto& rc = config.radiation;

    SweepSpec spec;
    spec.grid = config.grid;
    spec.grid.radial = rc.shells;
    spec.profile = config.profile;
    spec.current = rc.current;
    spec.k_mins = sweep_k_mins(rc);
    SweepResult sweep;
    try {
        sweep = ir_sweep(spec);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    {
        auto out = open_artifact(report, dir, "sweep.csv");
        write_sweep_csv(out, sweep);
    }
    const auto& cert = sweep.certification;
    report.summary["fock_slope"] = cert.fock_slope;
    report.summary["fock_r_squared"] = cert.fock_r_squared;
    report.summary["reducible_slope"] = cert.reducible_slope;
    report.summary["reducible_r_squared"] = cert.reducible_r_squared;
    report.summary["reducible_tail_change"] = cert.reducible_tail_change;

    const std::size_t rows = sweep.rows.size();
    if (rows >= 3) {
        checks.greater("radiation.fock_divergence_r_squared", cert.fock_r_squared, kFockR2Threshold,
                       "regression of n_fock on ln(1/k_min), slope " +
                           io::format_number(cert.fock_slope));
        checks.truth("radiation.fock_strictly_increasing", cert.fock_increasing);
    } else {
        checks.skipped("radiation.fock_divergence_r_squared", "need at least three k_min values");
    }
    // Only a profile vanishing at k -> 0 is expected to regularize.
    const bool suppresses_ir = config.profile.name == "power_gauss";
    if (rows >= 4) {
        const std::string detail =
            "max relative change over the last three halvings; profile " + config.profile.name;
        if (suppresses_ir)
            checks.less("radiation.reducible_convergence", cert.reducible_tail_change,
                        kCauchyThreshold, detail);
        else
            checks.info("radiation.reducible_convergence", cert.reducible_tail_change,
                        detail + " (Z does not vanish at k = 0; reported, not asserted)");
    } else {
        checks.skipped("radiation.reducible_convergence", "need at least four k_min values");
    }

    bool positive = true;
    for (const auto& r : sweep.rows)
        positive = positive && r.report.n_fock >= 0 && r.report.n_reducible >= 0 &&
                   r.report.P_fock[0] >= 0 && r.report.P_reducible[0] >= 0;
    checks.truth("radiation.positivity", positive, "n and P0 nonnegative in every row");

    {
        GridSpec gs = config.grid;
        gs.radial = rc.shells;
        gs.k_min = spec.k_mins.front();
        const MomentumGrid grid = MomentumGrid::build(gs);
        const VacuumProfile profile = VacuumProfile::from_template(grid, config.profile);
        const CurrentSpec j = CurrentSpec::from_template(grid, rc.current);
        CurrentSpec weighted = j;
        for (std::size_t i = 0; i < grid.size(); ++i)
            for (Helicity s : kHelicities)
                weighted.j(i, s) *= std::sqrt(profile.density(i));
        const double a = radiation_expectations(grid, profile, j).n_reducible;
        const double b = radiation_expectations(grid, profile, weighted).n_fock;
        checks.residual("radiation.z_weighting_identity", std::abs(a - b) / std::max(a, 1e-300),
                        1e-12, "n_red(j) vs n_fock(j sqrt Z)");
    }

    {
        const MomentumGrid grid = small_grid(1);
        CurrentSpec j{rng.amplitude(1)};
        double norm = 0.0;
        for (auto v : j.j.data()) norm += std::norm(v);
        j.j *= rc.conjugation_amplitude / std::sqrt(norm);
        const FockTruncation t(rc.conjugation_n_max);
        // Kets two levels below the cutoff: truncation enters only at O(|j|^5).
        const double r = out_field_residual(grid, j, rng.amplitude(1), 2, t, t.n_max() - 2);
        checks.residual("radiation.out_field_conjugation", r, 1e-8,
                        "N = 2, K = 1, n_max = " + std::to_string(t.n_max()) +
                            ", kets with occupations <= " + std::to_string(t.n_max() - 2));
    }

    {
        const MomentumGrid grid = small_grid(2);
        const VacuumProfile profile = VacuumProfile::from_template(grid, config.profile);
        CurrentSpec j{rng.amplitude(2)};
        j.j *= 0.2;
        const double formula = radiation_expectations(grid, profile, j).n_reducible;
        double worst = 0.0;
        for (std::size_t N : {1u, 2u}) {
            const EnsembleCoherent out_state = out_field_shift(
                grid, j, ensemble_coherent(profile, CoherentSpec{PolarizedAmplitude(2)}, N));
            const double dense =
                number_expectation(grid, materialize(grid, out_state, FockTruncation(8)));
            worst = std::max(worst, std::abs(dense - formula));
        }
        checks.residual("radiation.number_formula_vs_dense", worst, 1e-8,
                        "collective number on |O_j> at N = 1, 2, n_max = 8");
    }
    write_manifest(report, config, dir);
    return report;
}

ExperimentReport run_poisson(const ExperimentConfig& config, const fs::path& dir) {
    ensure_dir(dir);
    ExperimentReport report{"poisson", {}, {}, {}};
    Checks checks(report, config.suite.tolerance);
    const auto& pc = config.poisson;
    Rng rng = stream(config, kPoisson);
    const MomentumGrid grid = MomentumGrid::build(config.grid);
    const VacuumProfile profile = VacuumProfile::from_template(grid, config.profile);
    // A uniform |alpha| would make every factor exactly Poisson; random
    // amplitudes give a genuine Poisson mixture, rescaled to the target lambda.
    CoherentSpec alpha{rng.amplitude(grid.size())};
    double lambda0 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (Helicity s : kHelicities)
            lambda0 += grid.weight(i) * profile.density(i) * std::norm(alpha.alpha(i, s));
    alpha.alpha *= std::sqrt(pc.lambda / lambda0);

    auto table = open_artifact(report, dir, "poisson.csv");
    auto dist = open_artifact(report, dir, "distributions.csv");
    io::CsvWriter csv(table), dcsv(dist);
    csv.header({"N", "lambda", "total_variation"});
    dcsv.header({"N", "n", "p_ensemble", "p_poisson"});
    std::vector<double> tv;
    for (auto N : pc.N) {
        const auto cmp =
            compare_with_poisson(grid, profile, alpha, std::size_t(N), FockTruncation(pc.n_max));
        tv.push_back(cmp.total_variation);
        csv.row({N, cmp.lambda, cmp.total_variation});
        const auto q = poisson_pmf(cmp.lambda, cmp.distribution.size());
        for (std::size_t n = 0; n < cmp.distribution.size() && n <= 24; ++n)
            dcsv.row({N, std::int64_t(n), cmp.distribution[n], q[n]});
        report.summary["total_variation_N" + std::to_string(N)] = cmp.total_variation;
    }
    bool decreasing = true;
    for (std::size_t k = 1; k < tv.size(); ++k) decreasing = decreasing && tv[k] < tv[k - 1];
    checks.truth("poisson.total_variation_decreasing", decreasing, "over N = " + [&] {
        std::string s;
        for (std::size_t k = 0; k < pc.N.size(); ++k) s += (k ? "," : "") + std::to_string(pc.N[k]);
        return s;
    }());
    const std::string last = "N = " + std::to_string(pc.N.back()) + ", lambda = " +
                             io::format_number(pc.lambda);
    if (pc.lambda <= 1.0)
        checks.less("poisson.total_variation_final", tv.back(), 0.01, last);
    else
        checks.info("poisson.total_variation_final", tv.back(), last + " (bound stated for lambda <= 1)");
    write_manifest(report, config, dir);
    return report;
}

ExperimentReport run_covariance(const ExperimentConfig& config, const fs::path& dir) {
    ensure_dir(dir);
    ExperimentReport report{"covariance", {}, {}, {}};
    Checks checks(report, config.suite.tolerance);
    Rng rng = stream(config, kCovariance);
    const auto& cc = config.covariance;

    {
        const MomentumGrid grid = MomentumGrid::build(config.grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i)
            worst = std::max(worst, tetrad_residual(grid.point(i)));
        checks.residual("covariance.tetrad_invariants", worst, 1e-12,
                        std::to_string(grid.size()) + " grid points");
    }
    {
        const double theta = wigner_phase(SL2C::rotation_z(0.7), {1.0, 0.0, 0.0, 1.0});
        checks.residual("covariance.wigner_sign_convention", std::abs(theta + 0.35), 1e-12,
                        "Theta(rotation_z(phi), +z) = -phi/2");
    }

    const MomentumGrid grid = MomentumGrid::build(cc.grid);
    const FockTruncation t(cc.n_max);
    const int az = cc.grid.azimuthal;

    auto out = open_artifact(report, dir, "covariance.csv");
    io::CsvWriter csv(out);
    csv.header({"kind", "q", "y0", "y1", "y2", "y3", "picture", "operator_residual", "ibar_residual"});
    auto random_y = [&] {
        return FourVector{rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-2, 2)};
    };
    std::vector<cplx> g(grid.size());
    for (auto& v : g) v = rng.complex_normal();

    double worst_t = 0.0, worst_r = 0.0, worst_i = 0.0;
    auto run = [&](const std::string& kind, int q, const FourVector& y, Picture pic, double& worst) {
        const PoincareElement e{grid_rotation(grid, q), y};
        const double r = covariance_check(grid, e, rng.amplitude(grid.size()),
                                          rng.amplitude(grid.size()), t, 2, pic);
        const double ri = ibar_covariance_residual(grid, e, g, t, 2);
        worst = std::max(worst, r);
        worst_i = std::max(worst_i, ri);
        csv.row({kind, std::int64_t(q), y[0], y[1], y[2], y[3],
                 pic == Picture::vacuum ? "vacuum" : "physical", r, ri});
    };
    double worst_id = 0.0;
    run("identity", 0, {0, 0, 0, 0}, Picture::vacuum, worst_id);
    checks.residual("covariance.identity", worst_id, 1e-10);
    for (int n = 0; n < cc.translations; ++n) {
        run("translation", 0, random_y(), Picture::vacuum, worst_t);
        run("translation", 0, random_y(), Picture::physical, worst_t);
    }
    checks.residual("covariance.translations", worst_t, 1e-10,
                    std::to_string(2 * cc.translations) + " random translations, N = 2");
    for (int q = 1; q < az; ++q) {
        run("rotation", q, {0, 0, 0, 0}, Picture::vacuum, worst_r);
        run("rotation+translation", q, random_y(), Picture::vacuum, worst_r);
    }
    checks.residual("covariance.rotations", worst_r, 1e-10,
                    "grid-compatible z-rotations q = 1.." + std::to_string(az - 1) + ", N = 2");
    checks.residual("covariance.ibar", worst_i, 1e-10, "U^+ I-bar(g) U = I-bar(g o Lambda)");

    {
        const VacuumProfile profile = VacuumProfile::from_template(grid, config.profile);
        double worst = 0.0;
        OscillatorState psi(grid.size(), t);
        for (auto& v : psi.data()) v = rng.complex_normal();
        const double n0 = norm_squared(grid, psi);
        for (int q = 0; q < az; ++q) {
            const PoincareElement e{grid_rotation(grid, q), random_y()};
            worst = std::max(worst, std::abs(norm_squared(grid, transform_state(grid, e, psi, Picture::physical)) - n0) / n0);
            const OscillatorState vac = vacuum_state(profile, t);
            worst = std::max(worst, std::abs(norm_squared(grid, transform_state(grid, e, vac, Picture::vacuum)) - 1.0));
        }
        checks.residual("covariance.exact_path_unitarity", worst, 1e-12);
    }

    {
        double worst = 0.0;
        for (int n = 0; n < cc.cocycle_pairs; ++n) {
            // Multiples up to two full turns exercise the sign of the double cover.
            const int q1 = int(rng.below(2 * az)) - az, q2 = int(rng.below(2 * az)) - az;
            const SL2C l1 = SL2C::rotation_z(2.0 * kPi * q1 / az);
            const SL2C l2 = SL2C::rotation_z(2.0 * kPi * q2 / az);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const FourVector& k = grid.point(i);
                const double lhs = wigner_phase(l1 * l2, k);
                const double rhs = wigner_phase(l1, k) + wigner_phase(l2, l1.inverse().act(k));
                worst = std::max(worst, std::abs(std::remainder(lhs - rhs, 2.0 * kPi)));
            }
        }
        checks.residual("covariance.wigner_cocycle", worst, 1e-9,
                        std::to_string(cc.cocycle_pairs) + " random grid-compatible pairs");
    }

    {
        // Boosts are not grid-compatible; the resampled path reports its quadrature error.
        const VacuumProfile profile = VacuumProfile::from_template(grid, config.profile);
        const ProfileTemplate tpl = config.profile;
        double norm = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) norm += grid.weight(i) * template_density(tpl, grid.radius(i));
        const StateEvaluator vac = [tpl, norm](const FourVector& k, int np, int nm) {
            return (np == 0 && nm == 0) ? cplx(std::sqrt(template_density(tpl, k[0]) / norm)) : cplx{};
        };
        const auto res = transform_state(grid, {SL2C::boost_z(0.3), {}}, vac, t, Picture::vacuum);
        checks.info("covariance.boost_functional_norm_deviation", res.norm_deviation,
                    "rapidity 0.3 along z, resampled vacuum");
    }
    write_manifest(report, config, dir);
    return report;
}

ExperimentReport run_fields(const ExperimentConfig& config, const fs::path& dir) {
    ensure_dir(dir);
    ExperimentReport report{"fields", {}, {}, {}};
    Checks checks(report, config.suite.tolerance);
    Rng rng = stream(config, kFields);
    const auto& fc = config.fields;
    const MomentumGrid grid = MomentumGrid::build(config.grid);
    auto random_x = [&] {
        return FourVector{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    };

    {
        auto out = open_artifact(report, dir, "two_point.csv");
        io::CsvWriter csv(out);
        csv.header({"profile", "coincident_re", "coincident_im", "dual_path_diff"});
        double worst_c = 0.0, worst_d = 0.0;
        for (int p = 0; p < fc.profiles; ++p) {
            std::vector<cplx> amps(grid.size());
            for (auto& v : amps) v = rng.complex_normal();
            const VacuumProfile profile = VacuumProfile::normalize(grid, amps);
            const FourVector x = random_x(), y = random_x();
            const cplx same = two_point_product(grid, profile, x, x);
            const double dual = std::abs(two_point_product(grid, profile, x, y) -
                                         two_point_contraction(grid, profile, x, y));
            worst_c = std::max(worst_c, std::abs(same - 2.0));
            worst_d = std::max(worst_d, dual);
            csv.row({std::int64_t(p), same.real(), same.imag(), dual});
        }
        checks.residual("fields.two_point_coincident", worst_c, 1e-12,
                        std::to_string(fc.profiles) + " random normalized profiles");
        checks.residual("fields.two_point_dual_path", worst_d, 1e-12);
    }

    const VacuumProfile profile = VacuumProfile::from_template(grid, config.profile);
    {
        const FourVector x = random_x();
        const FieldVector moved = one_photon_vector(grid, profile, x);
        const FieldVector origin = one_photon_vector(grid, profile, {0, 0, 0, 0});
        double vac = 0.0, phys = 0.0;
        for (int a = 0; a < 4; ++a) {
            vac = std::max(vac, max_weighted_difference(
                                    grid, moved.components[a],
                                    translate(grid, x, origin.components[a], Picture::vacuum)));
            phys = std::max(phys, max_weighted_difference(
                                      grid, moved.components[a],
                                      translate(grid, x, origin.components[a], Picture::physical)));
        }
        checks.residual("fields.one_photon_translation", vac, 1e-12, "vacuum-picture generator");
        checks.info("fields.one_photon_translation_physical", phys,
                    "physical picture adds the zero-point phase e^{ik.x}");
    }

    {
        CoherentSpec alpha{rng.amplitude(grid.size())};
        alpha.alpha *= 0.5;
        const Tensor4 T = coherent_field_average(grid, profile, alpha, random_x());
        checks.residual("fields.average_antisymmetry", antisymmetry_residual(T), 1e-12);

        std::vector<double> ts;
        for (int n = 0; n < fc.scan_points; ++n)
            ts.push_back(fc.scan_points == 1 ? 0.0 : fc.scan_t_max * n / (fc.scan_points - 1));
        auto out = open_artifact(report, dir, "field_scan.csv");
        write_field_scan(out, grid, profile, alpha, {0, 0, 0, 0}, {1, 0, 0, 0}, ts);
    }

    {
        const std::array<std::array<double, 3>, 1> momenta{{{0.0, 0.0, 1.0}}};
        const std::array<double, 1> weights{1.0};
        const MomentumGrid one = MomentumGrid::from_momenta(momenta, weights);
        const VacuumProfile z1 = VacuumProfile::from_amplitudes(one, {1.0});
        CoherentSpec alpha{PolarizedAmplitude(1)};
        alpha.alpha(0, Helicity::minus) = 1.0;
        const Tensor4 at_origin = coherent_field_average(one, z1, alpha, {0, 0, 0, 0});
        const Tensor4 e = polarization_frame(one.point(0)).e;
        double r0 = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) r0 = std::max(r0, std::abs(at_origin[a][b] - e[a][b]));
        checks.residual("fields.average_single_point", r0, 1e-12, "alpha_- = 1, x = 0 gives e_ab");

        alpha.alpha(0, Helicity::plus) = cplx{0.3, -0.2};
        const FourVector x = random_x();
        const Tensor4 formula = coherent_field_average(one, z1, alpha, x);
        const Tensor4 dense =
            coherent_field_average_dense(one, z1, alpha, x, 2, FockTruncation(fc.dense_n_max));
        double r = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) r = std::max(r, std::abs(formula[a][b] - dense[a][b]));
        checks.residual("fields.average_dense_oracle", r, 1e-8,
                        "N = 2, n_max = " + std::to_string(fc.dense_n_max));
    }
    write_manifest(report, config, dir);
    return report;
}

ExperimentReport run_suite(const ExperimentConfig& config, const fs::path& dir) {
    ensure_dir(dir);
    ExperimentReport report{"suite", {}, {}, {}};
    Checks checks(report, config.suite.tolerance);
    Rng rng = stream(config, kSuite);

    {
        GridSpec s;
        s.radial = 1;
        s.polar = 1;
        s.azimuthal = 2;
        const MomentumGrid grid = MomentumGrid::build(s);
        const FockTruncation t(2);
        double ccr = 0.0, central = 0.0;
        for (int n = 0; n < config.suite.ccr_trials; ++n) {
            ccr = std::max(ccr, ccr_residual(grid, rng.amplitude(2), rng.amplitude(2), 2, t));
            std::vector<cplx> g{rng.complex_normal(), rng.complex_normal()};
            central = std::max(central, centrality_residual(grid, g, rng.amplitude(2), 2, t));
        }
        const std::string detail = std::to_string(config.suite.ccr_trials) +
                                   " random pairs, N = 2, K = 2, n_max = 2";
        checks.residual("suite.ccr", ccr, 1e-12, detail);
        checks.residual("suite.centrality", central, 1e-12, detail);
    }

    {
        const MomentumGrid grid = small_grid(3);
        const VacuumProfile profile = VacuumProfile::from_template(grid, config.profile);
        const std::vector<PolarizedAmplitude> f{rng.amplitude(3)}, g{rng.amplitude(3)};
        const cplx z = inner_product_z(grid, f[0], g[0], profile);
        double worst = 0.0, vac = 0.0;
        for (std::size_t N : {1u, 2u, 3u}) {
            worst = std::max(worst, std::abs(multiphoton_product_bruteforce(grid, f, g, profile, N,
                                                                            FockTruncation(1)) - z));
            const EnsembleState hit = apply_collective(grid, CollectiveOp::annihilation(f[0]),
                                                       ensemble_vacuum(profile, N, FockTruncation(1)));
            vac = std::max(vac, std::sqrt(norm_squared(grid, hit)));
        }
        checks.residual("suite.one_photon_N_independence", worst, 1e-12, "N = 1, 2, 3");
        checks.residual("suite.vacuum_annihilated", vac, 1e-14);
    }

    {
        const MomentumGrid grid = small_grid(1);
        const VacuumProfile profile = VacuumProfile::from_template(grid, config.profile);
        CoherentSpec beta{rng.amplitude(1)};
        double norm = 0.0;
        for (auto v : beta.alpha.data()) norm += std::norm(v);
        beta.alpha *= 0.2 / std::sqrt(norm);
        const FockTruncation t(config.suite.displacement_n_max);
        const EnsembleState product =
            materialize(grid, displacement_apply(grid, beta, ensemble_coherent(profile, CoherentSpec{PolarizedAmplitude(1)}, 2)), t, 1.0);
        EnsembleState dense = displacement_apply(grid, beta, ensemble_vacuum(profile, 2, t).densify());
        const double dense_norm = norm_squared(grid, dense);
        dense -= product.densify();
        const std::string detail = "N = 2, K = 1, |beta| = 0.2, n_max = " + std::to_string(t.n_max());
        checks.residual("suite.displacement_product_vs_dense", std::sqrt(norm_squared(grid, dense)),
                        1e-8, detail);
        checks.residual("suite.displacement_unitarity", std::abs(dense_norm - 1.0), 1e-8, detail);
        checks.residual("suite.displacement_conjugation",
                        displacement_conjugation_residual(grid, beta, rng.amplitude(1), 2, t, 2), 1e-8,
                        detail + ", kets with occupations <= 2");
    }

    using Runner = ExperimentReport (*)(const ExperimentConfig&, const fs::path&);
    const std::pair<const char*, Runner> runners[] = {{"theorem1", &run_theorem1},
                                                      {"radiation", &run_radiation},
                                                      {"poisson", &run_poisson},
                                                      {"covariance", &run_covariance},
                                                      {"fields", &run_fields}};
    for (const auto& [name, runner] : runners) {
        try {
            fold(report, runner(config, dir / name));
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            // A violated precondition inside one experiment fails that
            // experiment only; the rest of the suite still runs.
            checks.truth(std::string(name) + ".completed", false, e.what());
        }
    }

    nlohmann::ordered_json failures = nlohmann::ordered_json::array();
    for (const auto& c : report.failures()) failures.push_back(check_json(c));
    write_json(dir / "failures.json", failures);
    report.artifacts.push_back("failures.json");
    write_manifest(report, config, dir);
    return report;
}

}  // namespace rcr
