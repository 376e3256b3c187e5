#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rcr/grid.hpp"
#include "rcr/types.hpp"

namespace rcr {

using Rational = boost::multiprecision::cpp_rational;

/// Set partition of {0..m-1} as a restricted-growth string: block_of[0] = 0
/// and block_of[j] <= 1 + max(block_of[0..j-1]).
struct SetPartition {
    std::vector<int> block_of;
    int blocks = 0;

    std::vector<std::vector<int>> members() const;
    bool all_singletons() const { return blocks == static_cast<int>(block_of.size()); }
};

/// All Bell(m) partitions, in lexicographic order of their growth strings.
std::vector<SetPartition> enumerate_partitions(int m);

/// Fraction of the N^m oscillator assignments whose coincidence pattern is a
/// given partition with `blocks` blocks: N (N-1) ... (N-blocks+1) / N^m.
Rational multiplicity_weight(int blocks, int m, std::int64_t N);

/// Probability of the class with j coincidences (m - j distinct oscillators).
Rational class_probability_exact(int m, std::int64_t N, int j);
double class_probability(int m, std::int64_t N, int j);

/// G_{jl} = <f_j|g_l>_Z.
class GramMatrix {
public:
    explicit GramMatrix(std::size_t m) : m_(m), values_(m * m) {}

    std::size_t order() const { return m_; }
    cplx& operator()(std::size_t j, std::size_t l) { return values_[j * m_ + l]; }
    cplx operator()(std::size_t j, std::size_t l) const { return values_[j * m_ + l]; }
    std::span<const cplx> data() const { return values_; }

private:
    std::size_t m_;
    std::vector<cplx> values_;
};

GramMatrix gram_matrix(const MomentumGrid& grid, std::span<const PolarizedAmplitude> fs,
                       std::span<const PolarizedAmplitude> gs, const VacuumProfile& profile);

inline constexpr std::size_t kDefaultPermanentCap = 12;

cplx permanent(const GramMatrix& g);

/// sum_sigma sum_P weight(P) prod_{B in P} sum_i w_i Z_i prod_{j in B} h_{j,sigma(j)}(i),
/// h_{jl}(i) = sum_s conj(f_j(i,s)) g_l(i,s): every block collapses its momenta
/// onto one grid point and carries a single Z.
cplx partition_sum(const MomentumGrid& grid, std::span<const PolarizedAmplitude> fs,
                   std::span<const PolarizedAmplitude> gs, const VacuumProfile& profile,
                   const std::function<double(const SetPartition&)>& weight);

/// Exact <O|a(f_1)..a(f_m) a(g_1)^+..a(g_m')^+|O> at finite N in the
/// untruncated algebra; zero when m != m'.
cplx finite_n_correlator(const MomentumGrid& grid, std::span<const PolarizedAmplitude> fs,
                         std::span<const PolarizedAmplitude> gs, const VacuumProfile& profile,
                         std::int64_t N);

/// N -> infinity limit: permanent of the Z-weighted Gram matrix (zero when
/// m != m'). Throws CapacityError for m > cap.
cplx limit_correlator(const MomentumGrid& grid, std::span<const PolarizedAmplitude> fs,
                      std::span<const PolarizedAmplitude> gs, const VacuumProfile& profile,
                      std::size_t cap = kDefaultPermanentCap);

struct ConvergenceRow {
    std::int64_t N = 0;
    cplx finite;
    cplx limit;
    double abs_error = 0.0;
};

std::vector<ConvergenceRow> convergence_study(const MomentumGrid& grid,
                                              std::span<const PolarizedAmplitude> fs,
                                              std::span<const PolarizedAmplitude> gs,
                                              const VacuumProfile& profile,
                                              std::span<const std::int64_t> Ns);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of log(abs_error) against log(N).
LineFit loglog_fit(std::span<const ConvergenceRow> rows);

}  // namespace rcr
