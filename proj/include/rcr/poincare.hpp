#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rcr/ensemble.hpp"
#include "rcr/grid.hpp"
#include "rcr/oscillator.hpp"
#include "rcr/types.hpp"

namespace rcr {

using Spinor = std::array<cplx, 2>;

/// 2x2 complex matrix of unit determinant. Vectors correspond to Hermitian
/// matrices through X = (x^0 1 + x^j sigma_j) / sqrt(2); Lambda acts as
/// X -> Lambda X Lambda^+.
class SL2C {
public:
    using Matrix = std::array<std::array<cplx, 2>, 2>;
    static constexpr double kDetTolerance = 1e-12;

    SL2C() : m_{{{1.0, 0.0}, {0.0, 1.0}}} {}
    /// Throws std::invalid_argument when |det - 1| >= kDetTolerance.
    explicit SL2C(const Matrix& m);

    static SL2C identity() { return SL2C(); }
    /// Rotation of vectors by +phi about z: diag(e^{-i phi/2}, e^{i phi/2}).
    static SL2C rotation_z(double phi);
    static SL2C rotation_y(double phi);
    /// Boost of vectors along +z with rapidity eta.
    static SL2C boost_z(double eta);

    const Matrix& matrix() const { return m_; }
    cplx det() const;
    SL2C inverse() const;
    SL2C operator*(const SL2C& other) const;

    Spinor act(const Spinor& s) const;
    FourVector act(const FourVector& k) const;

private:
    Matrix m_;
};

/// SL(2,C) part and translation y of an element of the Poincare cover.
struct PoincareElement {
    SL2C lorentz;
    FourVector translation{};
};

/// pi with k = pi pi^+ under the dictionary, and omega with pairing(omega, pi) = 1.
struct SpinorDyad {
    Spinor pi;
    Spinor omega;
};

/// omega_A pi^A = a_0 b_1 - a_1 b_0.
cplx pairing(const Spinor& a, const Spinor& b);

/// Complex vector whose matrix is a b^+.
CFourVector spinor_vector(const Spinor& a, const Spinor& b);

/// Standard section pi = 2^{-1/4} (sqrt(k0+k3), (k1 + i k2) / sqrt(k0+k3)).
/// Throws DomainError for k off the future light cone or on the negative z-axis.
SpinorDyad standard_spinor(const FourVector& k);

/// m <-> omega pi^+, m_bar <-> pi omega^+ (upper indices) and
/// e_ab = m_bar_a k_b - k_a m_bar_b (lower indices).
struct PolarizationFrame {
    CFourVector m;
    CFourVector m_bar;
    Tensor4 e;
};

PolarizationFrame polarization_frame(const FourVector& k);

/// Largest violation of k.k = 0, k.m = 0, m.m = 0, m.m_bar = -1, k^a e_ab = 0
/// and of the reconstruction k = pi pi^+ and pairing(omega, pi) = 1.
double tetrad_residual(const FourVector& k);

/// lambda in Lambda pi(Lambda^{-1} k) = lambda pi(k).
cplx wigner_factor(const SL2C& lambda, const FourVector& k);

/// Theta(Lambda, k) = arg lambda. For rotation_z(phi) and k along +z this is -phi/2.
double wigner_phase(const SL2C& lambda, const FourVector& k);

/// Index map p with k_{p(i)} = Lambda^{-1} k_i. Throws IncompatibleElement when
/// some image misses the grid or lands on a cell of different weight.
std::vector<std::size_t> grid_permutation(const MomentumGrid& grid, const SL2C& lambda,
                                          double tolerance = 1e-9);

/// Rotation about z by 2 pi q / azimuthal, which permutes a built grid.
SL2C grid_rotation(const MomentumGrid& grid, int q);

/// U_{Lambda,y} on one oscillator (exact permutation path):
/// (U psi)(k, n) = e^{i k.y (n + c)} e^{2i (n+ - n-) Theta(Lambda, k)} psi(Lambda^{-1} k, n),
/// c = 1 in the physical picture, 0 in the vacuum picture. `adjoint` gives U^+.
LocalMap transform_map(const MomentumGrid& grid, const PoincareElement& element,
                       Picture picture, FockTruncation t, bool adjoint = false);

OscillatorState transform_state(const MomentumGrid& grid, const PoincareElement& element,
                                const OscillatorState& state, Picture picture);

/// Closed-form psi(k, n+, n-) for states that are not tied to the grid.
using StateEvaluator = std::function<cplx(const FourVector& k, int n_plus, int n_minus)>;

struct FunctionalTransform {
    OscillatorState state;
    /// |norm^2 of the transformed samples - norm^2 of the untransformed samples|.
    double norm_deviation = 0.0;
};

/// Resamples the evaluator at Lambda^{-1} k_i. dGamma is invariant, so no
/// Jacobian enters; the norm deviation is pure quadrature error.
FunctionalTransform transform_state(const MomentumGrid& grid, const PoincareElement& element,
                                    const StateEvaluator& evaluator, FockTruncation t,
                                    Picture picture);

/// f'(p, s) = f(Lambda p, s) e^{-2is Theta(Lambda, Lambda p)} e^{-i (Lambda p).y},
/// so that U^+ a(f) U = a(f').
PolarizedAmplitude transport_amplitude(const MomentumGrid& grid, const PoincareElement& element,
                                       const PolarizedAmplitude& f);

/// max of the matrix-element residuals of U^+ a(f) U - a(f') and
/// U^+ a(g)^+ U - a(g')^+ over basis kets of N oscillators.
double covariance_check(const MomentumGrid& grid, const PoincareElement& element,
                        const PolarizedAmplitude& f, const PolarizedAmplitude& g,
                        FockTruncation t, std::size_t oscillators = 2,
                        Picture picture = Picture::vacuum);

/// U^+ I-bar(g) U - I-bar(g o Lambda) on basis kets of N oscillators.
double ibar_covariance_residual(const MomentumGrid& grid, const PoincareElement& element,
                                std::span<const cplx> g, FockTruncation t,
                                std::size_t oscillators = 2);

}  // namespace rcr
