#include "rcr/radiation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rcr/combinatorics.hpp"
#include "rcr/io.hpp"
#include "rcr/kernels.hpp"
#include "rcr/poincare.hpp"

namespace rcr {

CurrentSpec CurrentSpec::from_template(const MomentumGrid& grid, const CurrentTemplate& tpl) {
    if (tpl.name != "soft") throw ConfigError("unknown current template '" + tpl.name + "'");
    if (!(tpl.k_uv > 0.0)) throw ConfigError("current template: k_uv must be positive");
    if (tpl.anisotropy < 0.0 || tpl.anisotropy > 1.0)
        throw ConfigError("current template: anisotropy must lie in [0, 1]");
    CurrentSpec c{PolarizedAmplitude(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const FourVector& k = grid.point(i);
        const double cos_t = k[3] / k[0];
        const double ang = 1.0 - tpl.anisotropy * cos_t * cos_t;
        const double amp = std::sqrt(0.5 * tpl.strength * ang) *
                           std::exp(-0.5 * k[0] * k[0] / (tpl.k_uv * tpl.k_uv)) / k[0];
        for (Helicity s : kHelicities) c.j(i, s) = amp;
    }
    return c;
}

ProjectedCurrent project_current(const MomentumGrid& grid, std::span<const CFourVector> J) {
    if (J.size() != grid.size()) throw std::invalid_argument("project_current: shape mismatch");
    ProjectedCurrent out{CurrentSpec{PolarizedAmplitude(grid.size())},
                         std::vector<double>(grid.size()), 0.0};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const PolarizationFrame f = polarization_frame(grid.point(i));
        const cplx jp = -minkowski(J[i], f.m);
        const cplx jm = -minkowski(J[i], f.m_bar);
        out.current.j(i, Helicity::plus) = jp;
        out.current.j(i, Helicity::minus) = jm;
        double r2 = 0.0;
        for (int a = 0; a < 4; ++a) r2 += std::norm(J[i][a] - (f.m_bar[a] * jp + f.m[a] * jm));
        out.residual[i] = std::sqrt(r2);
        out.max_residual = std::max(out.max_residual, out.residual[i]);
    }
    return out;
}

EnsembleState out_field_shift(const MomentumGrid& grid, const CurrentSpec& j,
                              const EnsembleState& in, const DisplacementOptions& opts) {
    return displacement_apply(grid, CoherentSpec{j.j}, in, opts);
}

EnsembleCoherent out_field_shift(const MomentumGrid& grid, const CurrentSpec& j,
                                 const EnsembleCoherent& in) {
    return displacement_apply(grid, CoherentSpec{j.j}, in);
}

double out_field_residual(const MomentumGrid& grid, const CurrentSpec& j,
                          const PolarizedAmplitude& f, std::size_t oscillators, FockTruncation t,
                          int level) {
    return displacement_conjugation_residual(grid, CoherentSpec{j.j}, f, oscillators, t, level);
}

RadiationReport radiation_expectations(const MomentumGrid& grid, const VacuumProfile& profile,
                                       const CurrentSpec& j) {
    if (j.j.points() != grid.size() || profile.size() != grid.size())
        throw std::invalid_argument("radiation_expectations: shape mismatch");
    std::vector<double> fock(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        fock[i] = grid.weight(i) * (std::norm(j.j(i, Helicity::plus)) +
                                    std::norm(j.j(i, Helicity::minus)));
    RadiationReport r;
    r.n_fock = parallel::reduce<double>(grid.size(), [&](std::size_t i) { return fock[i]; });
    r.n_reducible = parallel::reduce<double>(
        grid.size(), [&](std::size_t i) { return profile.density(i) * fock[i]; });
    for (int a = 0; a < 4; ++a) {
        r.P_fock[a] = parallel::reduce<double>(
            grid.size(), [&](std::size_t i) { return grid.point(i)[a] * fock[i]; });
        r.P_reducible[a] = parallel::reduce<double>(grid.size(), [&](std::size_t i) {
            return grid.point(i)[a] * profile.density(i) * fock[i];
        });
    }
    r.k_min = grid.size() ? grid.radius(0) : 0.0;
    r.k_max = r.k_min;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        r.k_min = std::min(r.k_min, grid.radius(i));
        r.k_max = std::max(r.k_max, grid.radius(i));
    }
    if (grid.spec()) {
        r.k_min = grid.spec()->k_min;
        r.k_max = grid.spec()->k_max;
    }
    return r;
}

double number_expectation(const MomentumGrid& grid, const EnsembleState& state, std::size_t cap) {
    const EnsembleState hit = apply_collective(grid, CollectiveOp::number(), state, cap);
    return std::real(inner_product(grid, state, hit, cap)) / norm_squared(grid, state, cap);
}

SweepResult ir_sweep(const SweepSpec& spec) {
    if (spec.k_mins.empty()) throw std::invalid_argument("ir_sweep: empty k_min list");
    for (std::size_t r = 1; r < spec.k_mins.size(); ++r)
        if (!(spec.k_mins[r] < spec.k_mins[r - 1]))
            throw std::invalid_argument("ir_sweep: k_min list must be strictly decreasing");

    SweepResult result;
    result.rows.resize(spec.k_mins.size());
    std::vector<std::string> errors(spec.k_mins.size());
#pragma omp parallel for schedule(dynamic)
    for (std::size_t r = 0; r < spec.k_mins.size(); ++r) {
        try {
            GridSpec gs = spec.grid;
            gs.k_min = spec.k_mins[r];
            const MomentumGrid grid = MomentumGrid::build(gs);
            const VacuumProfile profile = VacuumProfile::from_template(grid, spec.profile);
            const CurrentSpec j = CurrentSpec::from_template(grid, spec.current);
            result.rows[r] = {spec.k_mins[r], radiation_expectations(grid, profile, j)};
        } catch (const std::exception& e) {
            errors[r] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw ConfigError("ir_sweep: " + e);

    auto& c = result.certification;
    const auto& rows = result.rows;
    if (rows.size() >= 3) {
        std::vector<double> x, yf, yr;
        for (const auto& row : rows) {
            x.push_back(std::log(1.0 / row.k_min));
            yf.push_back(row.report.n_fock);
            yr.push_back(row.report.n_reducible);
        }
        const LineFit ff = fit_line(x, yf);
        const LineFit fr = fit_line(x, yr);
        c.fock_slope = ff.slope;
        c.fock_r_squared = ff.r_squared;
        c.reducible_slope = fr.slope;
        c.reducible_r_squared = fr.r_squared;
    }
    c.fock_increasing = true;
    for (std::size_t r = 1; r < rows.size(); ++r)
        if (!(rows[r].report.n_fock > rows[r - 1].report.n_fock)) c.fock_increasing = false;
    c.fock_divergent = rows.size() >= 3 && c.fock_increasing && c.fock_slope > 0.0 &&
                       c.fock_r_squared > kFockR2Threshold;

    if (rows.size() >= 4) {
        for (std::size_t r = rows.size() - 3; r < rows.size(); ++r) {
            const double prev = rows[r - 1].report.n_reducible;
            const double cur = rows[r].report.n_reducible;
            c.reducible_tail_change =
                std::max(c.reducible_tail_change, std::abs(cur - prev) / std::max(std::abs(cur), 1e-300));
        }
        c.reducible_convergent = c.reducible_tail_change < kCauchyThreshold;
    }
    return result;
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
    io::CsvWriter csv(out);
    csv.header({"k_min", "n_red", "n_fock", "P0_red", "P0_fock", "P3_red", "P3_fock"});
    for (const auto& row : result.rows) {
        const auto& r = row.report;
        csv.row({row.k_min, r.n_reducible, r.n_fock, r.P_reducible[0], r.P_fock[0],
                 r.P_reducible[3], r.P_fock[3]});
    }
}

}  // namespace rcr
