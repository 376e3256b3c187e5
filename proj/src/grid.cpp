#include "rcr/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "rcr/io.hpp"
#include "rcr/kernels.hpp"

namespace rcr {

namespace {

constexpr double kTwoPiCubed = 8.0 * kPi * kPi * kPi;

bool on_negative_z_axis(const std::array<double, 3>& p) {
    const double perp = std::hypot(p[0], p[1]);
    const double r = std::hypot(perp, p[2]);
    return perp <= 1e-14 * r && p[2] < 0.0;
}

}  // namespace

double shell_measure(double lo, double hi) {
    return 4.0 * kPi * (hi * hi - lo * lo) / (4.0 * kTwoPiCubed);
}

MomentumGrid MomentumGrid::build(const GridSpec& spec) {
    if (!(spec.k_min > 0.0) || !(spec.k_max > spec.k_min))
        throw std::invalid_argument("grid: require 0 < k_min < k_max");
    if (spec.radial < 1 || spec.polar < 1 || spec.azimuthal < 1)
        throw std::invalid_argument("grid: radial, polar and azimuthal counts must be >= 1");

    MomentumGrid g;
    g.spec_ = spec;
    const std::size_t n = static_cast<std::size_t>(spec.radial) * spec.polar * spec.azimuthal;
    g.points_.reserve(n);
    g.weights_.reserve(n);

    const double ratio = std::log(spec.k_max / spec.k_min);
    const double cell_solid_angle = 4.0 * kPi / (spec.polar * spec.azimuthal);
    for (int r = 0; r < spec.radial; ++r) {
        const double lo = spec.k_min * std::exp(ratio * r / spec.radial);
        const double hi = spec.k_min * std::exp(ratio * (r + 1) / spec.radial);
        const double k = std::sqrt(lo * hi);
        const double w = cell_solid_angle * (hi * hi - lo * lo) / (4.0 * kTwoPiCubed);
        for (int b = 0; b < spec.polar; ++b) {
            const double cos_t = -1.0 + (2.0 * b + 1.0) / spec.polar;
            const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
            for (int l = 0; l < spec.azimuthal; ++l) {
                const double phi = 2.0 * kPi * (l + spec.azimuth_offset) / spec.azimuthal;
                g.points_.push_back(
                    {k, k * sin_t * std::cos(phi), k * sin_t * std::sin(phi), k * cos_t});
                g.weights_.push_back(w);
            }
        }
    }
    return g;
}

MomentumGrid MomentumGrid::from_momenta(std::span<const std::array<double, 3>> momenta,
                                        std::span<const double> weights) {
    if (momenta.size() != weights.size())
        throw std::invalid_argument("grid: momenta and weights differ in length");
    if (momenta.empty()) throw std::invalid_argument("grid: empty point set");
    MomentumGrid g;
    for (std::size_t i = 0; i < momenta.size(); ++i) {
        const auto& p = momenta[i];
        const double k = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        if (!(k > 0.0) || !std::isfinite(k)) throw std::invalid_argument("grid: zero momentum");
        if (!(weights[i] > 0.0)) throw std::invalid_argument("grid: weights must be positive");
        if (on_negative_z_axis(p))
            throw DomainError("grid: momentum on the negative z-axis is excluded");
        g.points_.push_back({k, p[0], p[1], p[2]});
        g.weights_.push_back(weights[i]);
    }
    return g;
}

double MomentumGrid::delta_gamma(std::size_t i, std::size_t j) const {
    if (i >= size() || j >= size()) throw std::out_of_range("delta_gamma: index out of range");
    return i == j ? 1.0 / weights_[i] : 0.0;
}

double MomentumGrid::total_measure() const {
    return pairwise_sum(std::span<const double>(weights_));
}

PolarizedAmplitude& PolarizedAmplitude::operator+=(const PolarizedAmplitude& other) {
    if (other.values_.size() != values_.size())
        throw std::invalid_argument("PolarizedAmplitude: shape mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

PolarizedAmplitude& PolarizedAmplitude::operator*=(cplx factor) {
    for (auto& v : values_) v *= factor;
    return *this;
}

bool PolarizedAmplitude::all_finite() const {
    for (const auto& v : values_)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

PolarizedAmplitude operator+(PolarizedAmplitude a, const PolarizedAmplitude& b) {
    a += b;
    return a;
}

PolarizedAmplitude operator*(cplx factor, PolarizedAmplitude a) {
    a *= factor;
    return a;
}

double template_density(const ProfileTemplate& tpl, double kabs) {
    if (tpl.name == "power_gauss") {
        if (!(tpl.sigma > 0.0)) throw std::invalid_argument("profile: sigma must be positive");
        const double l = std::log(kabs) / tpl.sigma;
        return std::pow(kabs, tpl.epsilon) * std::exp(-l * l);
    }
    if (tpl.name == "constant") return 1.0;
    throw std::invalid_argument("profile: unknown template '" + tpl.name + "'");
}

VacuumProfile::VacuumProfile(std::vector<cplx> amplitudes) : amplitudes_(std::move(amplitudes)) {
    density_.reserve(amplitudes_.size());
    for (const auto& o : amplitudes_) {
        if (!std::isfinite(o.real()) || !std::isfinite(o.imag()))
            throw std::invalid_argument("profile: non-finite amplitude");
        density_.push_back(std::norm(o));
    }
}

VacuumProfile VacuumProfile::from_amplitudes(const MomentumGrid& grid,
                                             std::vector<cplx> amplitudes) {
    if (amplitudes.size() != grid.size()) throw std::invalid_argument("profile: size mismatch");
    VacuumProfile p(std::move(amplitudes));
    const double total = profile_measure(grid, p);
    if (std::abs(total - 1.0) > kNormTolerance)
        throw std::invalid_argument("profile: sum w Z = " + io::format_number(total) +
                                    " is not 1");
    return p;
}

VacuumProfile VacuumProfile::normalize(const MomentumGrid& grid, std::vector<cplx> amplitudes) {
    if (amplitudes.size() != grid.size()) throw std::invalid_argument("profile: size mismatch");
    VacuumProfile raw(std::move(amplitudes));
    const double total = profile_measure(grid, raw);
    if (!(total > 0.0) || !std::isfinite(total))
        throw std::invalid_argument("profile: cannot normalize a vanishing profile");
    const double scale = 1.0 / std::sqrt(total);
    std::vector<cplx> o(raw.amplitudes_);
    for (auto& v : o) v *= scale;
    return VacuumProfile(std::move(o));
}

VacuumProfile VacuumProfile::from_template(const MomentumGrid& grid, const ProfileTemplate& tpl) {
    std::vector<cplx> o(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        o[i] = std::sqrt(template_density(tpl, grid.radius(i)));
    return normalize(grid, std::move(o));
}

double profile_measure(const MomentumGrid& grid, const VacuumProfile& profile) {
    if (profile.size() != grid.size()) throw std::invalid_argument("profile: size mismatch");
    return parallel::reduce<double>(
        grid.size(), [&](std::size_t i) { return grid.weight(i) * profile.density(i); });
}

cplx inner_product_z(const MomentumGrid& grid, const PolarizedAmplitude& f,
                     const PolarizedAmplitude& g, const VacuumProfile& profile) {
    if (f.points() != grid.size() || g.points() != grid.size() || profile.size() != grid.size())
        throw std::invalid_argument("inner_product_z: shape mismatch");
    return parallel::reduce<cplx>(grid.size(), [&](std::size_t i) {
        cplx s = std::conj(f(i, Helicity::plus)) * g(i, Helicity::plus) +
                 std::conj(f(i, Helicity::minus)) * g(i, Helicity::minus);
        return grid.weight(i) * profile.density(i) * s;
    });
}

void write_grid_csv(std::ostream& out, const MomentumGrid& grid, const VacuumProfile& profile) {
    io::CsvWriter csv(out);
    csv.header({"k0", "k1", "k2", "k3", "w", "Z"});
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& k = grid.point(i);
        csv.row({k[0], k[1], k[2], k[3], grid.weight(i), profile.density(i)});
    }
}

}  // namespace rcr
