#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rcr/ensemble.hpp"
#include "rcr/grid.hpp"
#include "rcr/types.hpp"

namespace rcr {

/// Soft-photon template: |j(k, s)|^2 = (strength / 2) A(theta)^2 exp(-k^2 / k_uv^2) / k^2
/// per helicity, A(theta)^2 = 1 - anisotropy cos^2(theta), anisotropy in [0, 1].
/// "soft" is the only template.
struct CurrentTemplate {
    std::string name = "soft";
    double strength = 1.0;
    double k_uv = 5.0;
    double anisotropy = 0.0;
};

/// Helicity amplitudes j(k_i, s) of a transverse classical current.
struct CurrentSpec {
    PolarizedAmplitude j;

    static CurrentSpec from_template(const MomentumGrid& grid, const CurrentTemplate& tpl);
};

struct ProjectedCurrent {
    CurrentSpec current;
    /// Euclidean norm of J - (m_bar j_+ + m j_-) at each point.
    std::vector<double> residual;
    double max_residual = 0.0;
};

/// j_+ = -J.m (coefficient of m_bar), j_- = -J.m_bar (coefficient of m).
/// Longitudinal parts are not an error; they show up in the residual.
ProjectedCurrent project_current(const MomentumGrid& grid, std::span<const CFourVector> J);

/// Out state of the S-matrix, which up to a central phase is the displacement D(j).
EnsembleState out_field_shift(const MomentumGrid& grid, const CurrentSpec& j,
                              const EnsembleState& in, const DisplacementOptions& opts = {});
EnsembleCoherent out_field_shift(const MomentumGrid& grid, const CurrentSpec& j,
                                 const EnsembleCoherent& in);

/// D(j)^+ a(f) D(j) - a(f) - I-bar(conj(f) j) on kets with occupations <= level.
double out_field_residual(const MomentumGrid& grid, const CurrentSpec& j,
                          const PolarizedAmplitude& f, std::size_t oscillators, FockTruncation t,
                          int level);

struct RadiationReport {
    double n_reducible = 0.0;
    double n_fock = 0.0;
    FourVector P_reducible{};
    FourVector P_fock{};
    double k_min = 0.0;
    double k_max = 0.0;
};

/// n = sum_s sum_i w_i Z_i |j|^2 and P_a = sum_s sum_i w_i k_a Z_i |j|^2;
/// the Fock values drop Z.
RadiationReport radiation_expectations(const MomentumGrid& grid, const VacuumProfile& profile,
                                       const CurrentSpec& j);

/// <psi| number |psi> / <psi|psi> for the plain-sum number operator.
double number_expectation(const MomentumGrid& grid, const EnsembleState& state,
                          std::size_t cap = kDefaultDenseCap);

struct SweepSpec {
    /// Angular structure, k_max and shell count; k_min is taken from the list.
    GridSpec grid;
    ProfileTemplate profile;
    CurrentTemplate current;
    std::vector<double> k_mins;
};

struct SweepRow {
    double k_min = 0.0;
    RadiationReport report;
};

struct SweepCertification {
    double fock_slope = 0.0;
    double fock_r_squared = 0.0;
    bool fock_increasing = false;
    /// Affine growth in ln(1/k_min) with R^2 > 0.999, strictly increasing.
    bool fock_divergent = false;
    double reducible_slope = 0.0;
    double reducible_r_squared = 0.0;
    /// Largest relative change between consecutive rows over the last three halvings.
    double reducible_tail_change = 0.0;
    bool reducible_convergent = false;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    SweepCertification certification;
};

inline constexpr double kFockR2Threshold = 0.999;
inline constexpr double kCauchyThreshold = 0.01;

/// Rebuilds grid, profile and current for every k_min. Throws
/// std::invalid_argument for an empty or non-monotone k_min list.
SweepResult ir_sweep(const SweepSpec& spec);

/// Columns: k_min, n_red, n_fock, P0_red, P0_fock, P3_red, P3_fock.
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace rcr
