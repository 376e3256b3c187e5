#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <span>

#include "rcr/grid.hpp"
#include "rcr/oscillator.hpp"
#include "rcr/types.hpp"

namespace rcr {

/// |A_a(x)>, one oscillator state per lower spacetime index a.
struct FieldVector {
    std::array<OscillatorState, 4> components;
};

/// Component a has amplitude -i e^{ik.x} O(k) m_a(k) at (n+, n-) = (0, 1) and
/// -i e^{ik.x} O(k) m_bar_a(k) at (1, 0). Needs n_max >= 1.
FieldVector one_photon_vector(const MomentumGrid& grid, const VacuumProfile& profile,
                              const FourVector& x, FockTruncation t = FockTruncation(1));

/// sum_ab <u_a| (-g^{ab}) |v_b>.
cplx contract_minus_metric(const MomentumGrid& grid, const FieldVector& u, const FieldVector& v);

/// 2 sum_i w_i Z_i e^{i k_i.(x - y)}; exactly 2 at x = y.
cplx two_point_product(const MomentumGrid& grid, const VacuumProfile& profile,
                       const FourVector& x, const FourVector& y);

/// The same quantity from contract_minus_metric(|A(y)>, |A(x)>).
cplx two_point_contraction(const MomentumGrid& grid, const VacuumProfile& profile,
                           const FourVector& x, const FourVector& y);

/// Negative-frequency part of <O_alpha|F_ab(x)|O_alpha>:
/// sum_i w_i e_ab(k_i) Z_i (alpha_{i,-} e^{-ik.x} + conj(alpha_{i,+}) e^{ik.x}).
/// Independent of N; depends on alpha only through Z alpha.
Tensor4 coherent_field_average(const MomentumGrid& grid, const VacuumProfile& profile,
                               const CoherentSpec& alpha, const FourVector& x);

/// Same tensor as matrix elements <O_alpha| a(f_ab) + a(g_ab)^+ |O_alpha> of the
/// N-oscillator collective operators, with f_ab(k,-) = conj(e_ab) e^{ik.x} and
/// g_ab(k,+) = e_ab e^{ik.x}. Dense oracle; accuracy limited by the truncation.
Tensor4 coherent_field_average_dense(const MomentumGrid& grid, const VacuumProfile& profile,
                                     const CoherentSpec& alpha, const FourVector& x,
                                     std::size_t oscillators, FockTruncation t);

/// Derived quantity, not a printed formula: T + conj(T), the average of the
/// Hermitian field built from the negative-frequency part and its adjoint.
Tensor4 hermitian_field_average(const MomentumGrid& grid, const VacuumProfile& profile,
                                const CoherentSpec& alpha, const FourVector& x);

/// max_ab |T_ab + T_ba|.
double antisymmetry_residual(const Tensor4& t);

/// CSV scan of coherent_field_average along x(t) = origin + t direction.
/// Columns: t, then F01_re, F01_im, ..., F23_re, F23_im.
void write_field_scan(std::ostream& out, const MomentumGrid& grid, const VacuumProfile& profile,
                      const CoherentSpec& alpha, const FourVector& origin,
                      const FourVector& direction, std::span<const double> ts);

}  // namespace rcr
