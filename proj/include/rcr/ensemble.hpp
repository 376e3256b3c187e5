#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "rcr/grid.hpp"
#include "rcr/oscillator.hpp"
#include "rcr/types.hpp"

namespace rcr {

/// Default ceiling on the number of amplitudes of a dense N-oscillator tensor.
inline constexpr std::size_t kDefaultDenseCap = 2'000'000;

/// State of N oscillators. Either a product of N single-oscillator factors or
/// the full tensor (axis 0 = oscillator 1, slowest). Densification only
/// happens through densify() or through operators whose result is a sum of
/// products; both respect the amplitude cap.
class EnsembleState {
public:
    static EnsembleState product(std::vector<OscillatorState> factors);
    static EnsembleState dense(std::size_t oscillators, std::size_t points, FockTruncation t,
                               std::vector<cplx> amplitudes);
    static EnsembleState zeros(std::size_t oscillators, std::size_t points, FockTruncation t,
                               std::size_t cap = kDefaultDenseCap);

    bool is_dense() const { return std::holds_alternative<Dense>(form_); }
    std::size_t oscillators() const { return oscillators_; }
    std::size_t points() const { return points_; }
    FockTruncation truncation() const { return truncation_; }
    /// points * (n_max + 1)^2
    std::size_t local_dimension() const { return points_ * truncation_.block(); }

    const std::vector<OscillatorState>& factors() const;
    std::span<const cplx> amplitudes() const;
    std::span<cplx> amplitudes();

    EnsembleState densify(std::size_t cap = kDefaultDenseCap) const;

    EnsembleState& operator+=(const EnsembleState& other);  // dense only
    EnsembleState& operator-=(const EnsembleState& other);  // dense only
    EnsembleState& operator*=(cplx factor);

private:
    struct Dense {
        std::vector<cplx> amplitudes;
    };
    using Product = std::vector<OscillatorState>;

    EnsembleState(std::size_t n, std::size_t points, FockTruncation t,
                  std::variant<Product, Dense> form)
        : oscillators_(n), points_(points), truncation_(t), form_(std::move(form)) {}

    std::size_t oscillators_;
    std::size_t points_;
    FockTruncation truncation_;
    std::variant<Product, Dense> form_;
};

/// local_dim^N, throwing CapacityError above `cap`.
std::size_t dense_dimension(std::size_t local_dim, std::size_t oscillators, std::size_t cap);

cplx inner_product(const MomentumGrid& grid, const EnsembleState& a, const EnsembleState& b,
                   std::size_t cap = kDefaultDenseCap);
double norm_squared(const MomentumGrid& grid, const EnsembleState& a,
                    std::size_t cap = kDefaultDenseCap);

EnsembleState ensemble_vacuum(const VacuumProfile& profile, std::size_t oscillators,
                              FockTruncation t);

/// Collective operators: 1/sqrt(N) sum for annihilation/creation, 1/N sum for
/// I-bar, plain sum for four-momentum and number.
struct CollectiveOp {
    enum class Kind { annihilation, creation, ibar, four_momentum, number };

    Kind kind = Kind::number;
    PolarizedAmplitude f;
    std::vector<cplx> g;
    FourVector x{};
    Picture picture = Picture::vacuum;

    static CollectiveOp annihilation(PolarizedAmplitude f);
    static CollectiveOp creation(PolarizedAmplitude f);
    static CollectiveOp ibar(std::vector<cplx> g);
    static CollectiveOp four_momentum(const FourVector& x, Picture picture);
    static CollectiveOp number();
};

EnsembleState apply_collective(const MomentumGrid& grid, const CollectiveOp& op,
                               const EnsembleState& state, std::size_t cap = kDefaultDenseCap);

/// (map x map x ... x map) state. Product form stays a product.
EnsembleState apply_to_every_factor(const LocalMap& map, const EnsembleState& state,
                                    std::size_t cap = kDefaultDenseCap);

/// <O| a(f_1)...a(f_m) a(g_1)^+ ... a(g_m')^+ |O> by dense contraction.
/// Requires n_max >= max(m, m'), which makes the truncated result exact.
cplx multiphoton_product_bruteforce(const MomentumGrid& grid,
                                    std::span<const PolarizedAmplitude> fs,
                                    std::span<const PolarizedAmplitude> gs,
                                    const VacuumProfile& profile, std::size_t oscillators,
                                    FockTruncation t, std::size_t cap = kDefaultDenseCap);

/// Closed-form N-oscillator coherent state |O_alpha> = (x)^N |O_{alpha/sqrt N}>.
/// The profile may carry pointwise phases acquired under displacement.
struct EnsembleCoherent {
    VacuumProfile profile;
    CoherentSpec alpha;
    std::size_t oscillators = 1;
};

EnsembleCoherent ensemble_coherent(const VacuumProfile& profile, CoherentSpec alpha,
                                   std::size_t oscillators);

/// Product form of the closed-form state under truncation `t`.
EnsembleState materialize(const MomentumGrid& grid, const EnsembleCoherent& state,
                          FockTruncation t, double tail_tolerance = 1e-10);

/// Closed-form displacement: alpha -> alpha + beta; the profile picks up the
/// central pointwise phase exp(i sum_s Im(beta conj alpha) / N).
EnsembleCoherent displacement_apply(const MomentumGrid& grid, const CoherentSpec& beta,
                                    const EnsembleCoherent& state);

struct DisplacementOptions {
    std::size_t cap = kDefaultDenseCap;
    /// Relative size of the last Taylor term kept in each substep.
    double term_tolerance = 1e-15;
};

/// exp(a(beta)^+ - a(beta)) on a stored state. Product form: factor-wise
/// single-oscillator exponential with beta / sqrt(N). Dense form: Taylor
/// series of the collective generator with norm-bounded substeps.
EnsembleState displacement_apply(const MomentumGrid& grid, const CoherentSpec& beta,
                                 const EnsembleState& state, const DisplacementOptions& opts = {});

/// Distribution of the total excitation number (all oscillators, both
/// helicities). Product form convolves factor distributions.
std::vector<double> excitation_distribution(const MomentumGrid& grid, const EnsembleState& state,
                                            std::size_t cap = kDefaultDenseCap);

std::vector<double> poisson_pmf(double lambda, std::size_t length);

/// 1/2 sum |p - q| over the support of p plus half the q-mass beyond it.
double total_variation(std::span<const double> p, std::span<const double> q_full);

struct PoissonComparison {
    double lambda = 0.0;
    double total_variation = 0.0;
    std::vector<double> distribution;
};

/// Excitation statistics of |O_alpha> for N oscillators against Poisson(lambda),
/// lambda = sum_s sum_i w_i Z_i |alpha|^2.
PoissonComparison compare_with_poisson(const MomentumGrid& grid, const VacuumProfile& profile,
                                       const CoherentSpec& alpha, std::size_t oscillators,
                                       FockTruncation t, double tail_tolerance = 1e-10);

/// Orthonormal kets of N oscillators whose every occupation is <= level,
/// enumerated as dense index lists.
std::vector<std::size_t> low_occupation_indices(std::size_t points, FockTruncation t,
                                                std::size_t oscillators, int level);

/// max |<e_a| R |e_b>| over orthonormal basis kets e_a, e_b with all
/// occupations <= level. `residual` maps a dense state to R(state).
double max_matrix_element_residual(
    const MomentumGrid& grid, std::size_t oscillators, FockTruncation t, int level,
    const std::function<EnsembleState(const EnsembleState&)>& residual,
    std::size_t cap = kDefaultDenseCap);

/// [a(f), a(g)^+] - I-bar(h), h_i = sum_s conj(f) g, on the safe subspace.
double ccr_residual(const MomentumGrid& grid, const PolarizedAmplitude& f,
                    const PolarizedAmplitude& g, std::size_t oscillators, FockTruncation t);

/// max of |[I-bar(g), a(f)]| and |[I-bar(g), a(f)^+]| on the safe subspace.
double centrality_residual(const MomentumGrid& grid, std::span<const cplx> g,
                           const PolarizedAmplitude& f, std::size_t oscillators,
                           FockTruncation t);

/// D(beta)^+ a(f) D(beta) - a(f) - I-bar(h), h_i = sum_s conj(f) beta, on kets
/// with occupations <= level.
double displacement_conjugation_residual(const MomentumGrid& grid, const CoherentSpec& beta,
                                         const PolarizedAmplitude& f, std::size_t oscillators,
                                         FockTruncation t, int level);

}  // namespace rcr
