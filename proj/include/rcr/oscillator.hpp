#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rcr/grid.hpp"
#include "rcr/kernels.hpp"
#include "rcr/types.hpp"

namespace rcr {

/// Maximal occupation per helicity of the two-mode Fock space at each point.
class FockTruncation {
public:
    explicit FockTruncation(int n_max);

    int n_max() const { return n_max_; }
    int levels() const { return n_max_ + 1; }
    /// (n_max + 1)^2 amplitudes per grid point.
    std::size_t block() const {
        return static_cast<std::size_t>(levels()) * static_cast<std::size_t>(levels());
    }

    friend bool operator==(FockTruncation, FockTruncation) = default;

private:
    int n_max_;
};

/// Single-oscillator state psi(i, n+, n-) on grid x truncated two-mode Fock
/// space. Dense, point-major, then n+, then n-. The norm is measure-weighted:
/// <phi|psi> = sum_i w_i sum_n conj(phi) psi.
class OscillatorState {
public:
    OscillatorState(std::size_t points, FockTruncation truncation);

    /// The ket |k_i, n+, n->: amplitude 1/w_i at a single slot.
    static OscillatorState basis(const MomentumGrid& grid, FockTruncation truncation,
                                 std::size_t i, int n_plus, int n_minus);

    std::size_t points() const { return points_; }
    FockTruncation truncation() const { return truncation_; }
    std::size_t size() const { return amplitudes_.size(); }

    std::size_t index(std::size_t i, int n_plus, int n_minus) const {
        const auto L = static_cast<std::size_t>(truncation_.levels());
        return (i * L + static_cast<std::size_t>(n_plus)) * L + static_cast<std::size_t>(n_minus);
    }

    cplx& operator()(std::size_t i, int n_plus, int n_minus) {
        return amplitudes_[index(i, n_plus, n_minus)];
    }
    cplx operator()(std::size_t i, int n_plus, int n_minus) const {
        return amplitudes_[index(i, n_plus, n_minus)];
    }

    std::span<cplx> data() { return amplitudes_; }
    std::span<const cplx> data() const { return amplitudes_; }

    OscillatorState& operator+=(const OscillatorState& other);
    OscillatorState& operator-=(const OscillatorState& other);
    OscillatorState& operator*=(cplx factor);

    /// True when every amplitude with n+ > level or n- > level vanishes.
    bool supported_below(int level) const;

private:
    std::size_t points_;
    FockTruncation truncation_;
    std::vector<cplx> amplitudes_;
};

OscillatorState operator+(OscillatorState a, const OscillatorState& b);
OscillatorState operator-(OscillatorState a, const OscillatorState& b);
OscillatorState operator*(cplx factor, OscillatorState a);

cplx inner_product(const MomentumGrid& grid, const OscillatorState& a, const OscillatorState& b);
double norm_squared(const MomentumGrid& grid, const OscillatorState& a);

/// Largest |amplitude| difference, scaled by sqrt(w_i) so it is a
/// basis-independent matrix-element residual.
double max_weighted_difference(const MomentumGrid& grid, const OscillatorState& a,
                               const OscillatorState& b);

enum class Picture { physical, vacuum };

// Local maps. Each acts on a full oscillator block (points * (n_max+1)^2) and
// is block-diagonal in the grid index, so the same map serves single
// oscillators and individual tensor factors of an ensemble.

/// a(f) = sum_s sum_i w_i conj(f_{i,s}) a(k_i, s).
LocalMap annihilation_map(const PolarizedAmplitude& f, FockTruncation t);
/// Adjoint of annihilation_map; amplitude pushed above n_max is dropped.
LocalMap creation_map(const PolarizedAmplitude& f, FockTruncation t);
/// I(g) = int dGamma g(k) I_k: multiplication by g_i.
LocalMap ik_map(std::span<const cplx> g, FockTruncation t);
/// n+ + n-.
LocalMap number_map(std::size_t points, FockTruncation t);
/// x.P: multiplies by k_i.x (n+ + n- + 1) (physical) or k_i.x (n+ + n-) (vacuum).
LocalMap four_momentum_map(const MomentumGrid& grid, const FourVector& x, Picture picture,
                           FockTruncation t);
/// exp(i x.P) for the same generator.
LocalMap translation_map(const MomentumGrid& grid, const FourVector& x, Picture picture,
                         FockTruncation t);

OscillatorState apply_map(const LocalMap& map, const OscillatorState& state);

OscillatorState vacuum_state(const VacuumProfile& profile, FockTruncation t);

OscillatorState apply_annihilation(const PolarizedAmplitude& f, const OscillatorState& state);
OscillatorState apply_creation(const PolarizedAmplitude& f, const OscillatorState& state);
OscillatorState apply_ik(std::span<const cplx> g, const OscillatorState& state);
OscillatorState apply_number(const OscillatorState& state);
OscillatorState apply_four_momentum(const MomentumGrid& grid, const FourVector& x,
                                    const OscillatorState& state, Picture picture);
OscillatorState translate(const MomentumGrid& grid, const FourVector& x,
                          const OscillatorState& state, Picture picture);

/// Coherent amplitudes alpha(k_i, s).
struct CoherentSpec {
    PolarizedAmplitude alpha;
};

/// Probability mass the untruncated coherent state puts above n_max:
/// sum_i w_i Z_i (1 - P(n+ <= n_max) P(n- <= n_max)).
double coherent_tail_mass(const MomentumGrid& grid, const VacuumProfile& profile,
                          const CoherentSpec& spec, FockTruncation t);

/// O_alpha(k, n+, n-) = O(k) alpha+^n+ alpha-^n- / sqrt(n+! n-!) exp(-sum|alpha|^2/2).
/// Throws TruncationError when coherent_tail_mass exceeds `tail_tolerance`.
OscillatorState coherent_state(const MomentumGrid& grid, const VacuumProfile& profile,
                               const CoherentSpec& spec, FockTruncation t,
                               double tail_tolerance = 1e-10);

/// Distribution of n+ + n- (index = total excitation), sum_i w_i weighted.
std::vector<double> excitation_distribution(const MomentumGrid& grid,
                                            const OscillatorState& state);

}  // namespace rcr
