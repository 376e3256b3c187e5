#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rcr/types.hpp"

namespace rcr {

/// Construction parameters for a log-radial x equal-area-angular light-cone grid.
///
/// Radial cells are log-spaced on [k_min, k_max]; each cell carries the node
/// sqrt(lo * hi). The sphere is cut into `polar` bands of equal cos(theta)
/// width, each split into `azimuthal` equal sectors whose nodes sit at
/// phi = 2 pi (l + azimuth_offset) / azimuthal. Band centres never reach
/// cos(theta) = -1, so the negative z-axis is excluded for every spec.
struct GridSpec {
    double k_min = 0.1;
    double k_max = 10.0;
    int radial = 16;
    int polar = 2;
    int azimuthal = 4;
    double azimuth_offset = 0.5;
};

/// Measure of the full-sphere shell lo <= |k| <= hi under
/// dGamma = d^3k / ((2 pi)^3 2|k|).
double shell_measure(double lo, double hi);

/// Finite set of null, positive-energy momenta with quadrature weights
/// approximating the invariant measure dGamma. Immutable.
class MomentumGrid {
public:
    /// Log-radial grid; weights are the exact dGamma-measure of each cell.
    static MomentumGrid build(const GridSpec& spec);

    /// Explicit construction (test fixtures, unit-weight grids). Energies are
    /// set to |k| exactly. Rejects k = 0, non-positive weights and momenta on
    /// the negative z-axis.
    static MomentumGrid from_momenta(std::span<const std::array<double, 3>> momenta,
                                     std::span<const double> weights);

    std::size_t size() const { return points_.size(); }
    const FourVector& point(std::size_t i) const { return points_.at(i); }
    double weight(std::size_t i) const { return weights_.at(i); }
    double radius(std::size_t i) const { return points_.at(i)[0]; }
    std::span<const FourVector> points() const { return points_; }
    std::span<const double> weights() const { return weights_; }
    const std::optional<GridSpec>& spec() const { return spec_; }

    /// 1/w_i on the diagonal, 0 elsewhere: the discrete delta for dGamma.
    double delta_gamma(std::size_t i, std::size_t j) const;

    double total_measure() const;

private:
    MomentumGrid() = default;

    std::vector<FourVector> points_;
    std::vector<double> weights_;
    std::optional<GridSpec> spec_;
};

enum class Helicity : int { plus = 0, minus = 1 };

inline constexpr std::array<Helicity, 2> kHelicities{Helicity::plus, Helicity::minus};

inline int sign_of(Helicity s) { return s == Helicity::plus ? 1 : -1; }

/// Complex test function f(k_i, s) over grid points and both helicities.
class PolarizedAmplitude {
public:
    PolarizedAmplitude() = default;
    explicit PolarizedAmplitude(std::size_t points) : values_(2 * points, cplx{}) {}

    std::size_t points() const { return values_.size() / 2; }

    cplx& operator()(std::size_t i, Helicity s) { return values_[2 * i + static_cast<int>(s)]; }
    cplx operator()(std::size_t i, Helicity s) const {
        return values_[2 * i + static_cast<int>(s)];
    }

    std::span<cplx> data() { return values_; }
    std::span<const cplx> data() const { return values_; }

    PolarizedAmplitude& operator+=(const PolarizedAmplitude& other);
    PolarizedAmplitude& operator*=(cplx factor);

    bool all_finite() const;

private:
    std::vector<cplx> values_;
};

PolarizedAmplitude operator+(PolarizedAmplitude a, const PolarizedAmplitude& b);
PolarizedAmplitude operator*(cplx factor, PolarizedAmplitude a);

/// Named vacuum-profile templates; densities are normalized numerically.
///   power_gauss: Z ~ |k|^epsilon exp(-(ln|k| / sigma)^2)
///   constant:    Z ~ 1
struct ProfileTemplate {
    std::string name = "power_gauss";
    double epsilon = 1.0;
    double sigma = 1.0;
};

/// Unnormalized template density at |k|. Throws on unknown template names.
double template_density(const ProfileTemplate& tpl, double kabs);

/// Vacuum wave function O(k_i) with Z_i = |O_i|^2 and sum_i w_i Z_i = 1.
class VacuumProfile {
public:
    static constexpr double kNormTolerance = 1e-12;

    /// Takes amplitudes that are already normalized; throws otherwise.
    static VacuumProfile from_amplitudes(const MomentumGrid& grid, std::vector<cplx> amplitudes);

    /// Rescales the amplitudes so that sum_i w_i |O_i|^2 = 1.
    static VacuumProfile normalize(const MomentumGrid& grid, std::vector<cplx> amplitudes);

    static VacuumProfile from_template(const MomentumGrid& grid, const ProfileTemplate& tpl);

    std::size_t size() const { return amplitudes_.size(); }
    cplx amplitude(std::size_t i) const { return amplitudes_.at(i); }
    double density(std::size_t i) const { return density_.at(i); }
    std::span<const cplx> amplitudes() const { return amplitudes_; }
    std::span<const double> densities() const { return density_; }

private:
    explicit VacuumProfile(std::vector<cplx> amplitudes);

    std::vector<cplx> amplitudes_;
    std::vector<double> density_;
};

/// sum_i w_i Z_i; equals 1 for every constructed profile.
double profile_measure(const MomentumGrid& grid, const VacuumProfile& profile);

/// <f|g>_Z = sum_s sum_i w_i Z_i conj(f_{i,s}) g_{i,s}.
cplx inner_product_z(const MomentumGrid& grid, const PolarizedAmplitude& f,
                     const PolarizedAmplitude& g, const VacuumProfile& profile);

/// CSV export with columns k0,k1,k2,k3,w,Z.
void write_grid_csv(std::ostream& out, const MomentumGrid& grid, const VacuumProfile& profile);

}  // namespace rcr
