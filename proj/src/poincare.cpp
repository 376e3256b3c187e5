#include "rcr/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace rcr {

namespace {

using Matrix = SL2C::Matrix;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Matrix vector_matrix(const CFourVector& x) {
    const cplx i{0.0, 1.0};
    return {{{kInvSqrt2 * (x[0] + x[3]), kInvSqrt2 * (x[1] - i * x[2])},
             {kInvSqrt2 * (x[1] + i * x[2]), kInvSqrt2 * (x[0] - x[3])}}};
}

CFourVector matrix_vector(const Matrix& m) {
    const cplx i{0.0, 1.0};
    return {kInvSqrt2 * (m[0][0] + m[1][1]), kInvSqrt2 * (m[1][0] + m[0][1]),
            kInvSqrt2 * (m[1][0] - m[0][1]) / i, kInvSqrt2 * (m[0][0] - m[1][1])};
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    Matrix c{};
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) c[r][s] = a[r][0] * b[0][s] + a[r][1] * b[1][s];
    return c;
}

Matrix dagger(const Matrix& a) {
    return {{{std::conj(a[0][0]), std::conj(a[1][0])}, {std::conj(a[0][1]), std::conj(a[1][1])}}};
}

struct PermutedPhases {
    std::vector<std::size_t> perm;
    std::vector<cplx> phase;  // (i, n+, n-) layout of one oscillator block
};

PermutedPhases permuted_phases(const MomentumGrid& grid, const PoincareElement& element,
                               Picture picture, FockTruncation t) {
    PermutedPhases out;
    out.perm = grid_permutation(grid, element.lorentz);
    const int L = t.levels();
    const double c = picture == Picture::physical ? 1.0 : 0.0;
    out.phase.resize(grid.size() * t.block());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double ky = minkowski(grid.point(i), element.translation);
        const double theta = wigner_phase(element.lorentz, grid.point(i));
        for (int np = 0; np < L; ++np)
            for (int nm = 0; nm < L; ++nm)
                out.phase[(i * L + np) * L + nm] =
                    std::polar(1.0, ky * (np + nm + c) + 2.0 * (np - nm) * theta);
    }
    return out;
}

}  // namespace

SL2C::SL2C(const Matrix& m) : m_(m) {
    if (std::abs(det() - 1.0) >= kDetTolerance)
        throw std::invalid_argument("SL2C: determinant differs from 1");
}

SL2C SL2C::rotation_z(double phi) {
    return SL2C(Matrix{{{std::polar(1.0, -phi / 2), 0.0}, {0.0, std::polar(1.0, phi / 2)}}});
}

SL2C SL2C::rotation_y(double phi) {
    const double c = std::cos(phi / 2), s = std::sin(phi / 2);
    return SL2C(Matrix{{{c, -s}, {s, c}}});
}

SL2C SL2C::boost_z(double eta) {
    return SL2C(Matrix{{{std::exp(eta / 2), 0.0}, {0.0, std::exp(-eta / 2)}}});
}

cplx SL2C::det() const { return m_[0][0] * m_[1][1] - m_[0][1] * m_[1][0]; }

SL2C SL2C::inverse() const {
    SL2C r;
    r.m_ = {{{m_[1][1], -m_[0][1]}, {-m_[1][0], m_[0][0]}}};
    return r;
}

SL2C SL2C::operator*(const SL2C& other) const {
    SL2C r;
    r.m_ = multiply(m_, other.m_);
    return r;
}

Spinor SL2C::act(const Spinor& s) const {
    return {m_[0][0] * s[0] + m_[0][1] * s[1], m_[1][0] * s[0] + m_[1][1] * s[1]};
}

FourVector SL2C::act(const FourVector& k) const {
    const CFourVector v = matrix_vector(multiply(multiply(m_, vector_matrix(complexify(k))), dagger(m_)));
    return {v[0].real(), v[1].real(), v[2].real(), v[3].real()};
}

cplx pairing(const Spinor& a, const Spinor& b) { return a[0] * b[1] - a[1] * b[0]; }

CFourVector spinor_vector(const Spinor& a, const Spinor& b) {
    return matrix_vector({{{a[0] * std::conj(b[0]), a[0] * std::conj(b[1])},
                           {a[1] * std::conj(b[0]), a[1] * std::conj(b[1])}}});
}

SpinorDyad standard_spinor(const FourVector& k) {
    const double kabs = std::sqrt(k[1] * k[1] + k[2] * k[2] + k[3] * k[3]);
    if (!(k[0] > 0.0) || std::abs(k[0] - kabs) > 1e-9 * k[0])
        throw DomainError("standard_spinor: momentum is not null with positive energy");
    const double plus = k[0] + k[3];
    if (plus <= 1e-12 * k[0])
        throw DomainError("standard_spinor: momentum on the negative z-axis");
    const double scale = std::pow(2.0, -0.25);
    const double root = std::sqrt(plus);
    SpinorDyad d;
    d.pi = {scale * root, scale * cplx{k[1], k[2]} / root};
    const double n2 = std::norm(d.pi[0]) + std::norm(d.pi[1]);
    d.omega = {std::conj(d.pi[1]) / n2, -std::conj(d.pi[0]) / n2};
    return d;
}

PolarizationFrame polarization_frame(const FourVector& k) {
    const SpinorDyad d = standard_spinor(k);
    PolarizationFrame f;
    f.m = spinor_vector(d.omega, d.pi);
    f.m_bar = spinor_vector(d.pi, d.omega);
    const CFourVector mb = lower(f.m_bar);
    const CFourVector kl = lower(complexify(k));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) f.e[a][b] = mb[a] * kl[b] - kl[a] * mb[b];
    return f;
}

double tetrad_residual(const FourVector& k) {
    const SpinorDyad d = standard_spinor(k);
    const PolarizationFrame f = polarization_frame(k);
    const CFourVector kc = complexify(k);
    const CFourVector rec = spinor_vector(d.pi, d.pi);
    double r = 0.0;
    for (int a = 0; a < 4; ++a) r = std::max(r, std::abs(rec[a] - kc[a]));
    r = std::max(r, std::abs(pairing(d.omega, d.pi) - 1.0));
    r = std::max(r, std::abs(minkowski(k, k)));
    r = std::max(r, std::abs(minkowski(kc, f.m)));
    r = std::max(r, std::abs(minkowski(f.m, f.m)));
    r = std::max(r, std::abs(minkowski(f.m, f.m_bar) + 1.0));
    for (int b = 0; b < 4; ++b) {
        cplx s{};
        for (int a = 0; a < 4; ++a) s += kc[a] * f.e[a][b];
        r = std::max(r, std::abs(s));
    }
    return r;
}

cplx wigner_factor(const SL2C& lambda, const FourVector& k) {
    const Spinor pi = standard_spinor(k).pi;
    const Spinor moved = lambda.act(standard_spinor(lambda.inverse().act(k)).pi);
    const double n2 = std::norm(pi[0]) + std::norm(pi[1]);
    return (std::conj(pi[0]) * moved[0] + std::conj(pi[1]) * moved[1]) / n2;
}

double wigner_phase(const SL2C& lambda, const FourVector& k) {
    return std::arg(wigner_factor(lambda, k));
}

std::vector<std::size_t> grid_permutation(const MomentumGrid& grid, const SL2C& lambda,
                                          double tolerance) {
    const SL2C inv = lambda.inverse();
    std::vector<std::size_t> perm(grid.size());
    std::vector<bool> used(grid.size(), false);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const FourVector q = inv.act(grid.point(i));
        const double scale = std::max(1.0, q[0]);
        bool found = false;
        for (std::size_t j = 0; j < grid.size() && !found; ++j) {
            const FourVector& p = grid.point(j);
            double d = 0.0;
            for (int a = 0; a < 4; ++a) d = std::max(d, std::abs(p[a] - q[a]));
            if (d <= tolerance * scale && !used[j]) {
                if (std::abs(grid.weight(j) - grid.weight(i)) > 1e-12 * grid.weight(i))
                    throw IncompatibleElement("grid_permutation: image cell has a different weight");
                perm[i] = j;
                used[j] = true;
                found = true;
            }
        }
        if (!found)
            throw IncompatibleElement("grid_permutation: Lambda^-1 k_" + std::to_string(i) +
                                      " is not a grid point");
    }
    return perm;
}

SL2C grid_rotation(const MomentumGrid& grid, int q) {
    if (!grid.spec()) throw IncompatibleElement("grid_rotation: grid has no angular structure");
    return SL2C::rotation_z(2.0 * kPi * q / grid.spec()->azimuthal);
}

LocalMap transform_map(const MomentumGrid& grid, const PoincareElement& element,
                       Picture picture, FockTruncation t, bool adjoint) {
    auto pp = std::make_shared<PermutedPhases>(permuted_phases(grid, element, picture, t));
    const std::size_t B = t.block();
    return [pp, B, adjoint](std::span<const cplx> in, std::span<cplx> out) {
        for (std::size_t i = 0; i < pp->perm.size(); ++i) {
            const std::size_t src = pp->perm[i];
            for (std::size_t n = 0; n < B; ++n) {
                const cplx ph = pp->phase[i * B + n];
                if (adjoint)
                    out[src * B + n] = std::conj(ph) * in[i * B + n];
                else
                    out[i * B + n] = ph * in[src * B + n];
            }
        }
    };
}

OscillatorState transform_state(const MomentumGrid& grid, const PoincareElement& element,
                                const OscillatorState& state, Picture picture) {
    return apply_map(transform_map(grid, element, picture, state.truncation()), state);
}

FunctionalTransform transform_state(const MomentumGrid& grid, const PoincareElement& element,
                                    const StateEvaluator& evaluator, FockTruncation t,
                                    Picture picture) {
    const SL2C inv = element.lorentz.inverse();
    const double c = picture == Picture::physical ? 1.0 : 0.0;
    OscillatorState out(grid.size(), t), reference(grid.size(), t);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const FourVector& k = grid.point(i);
        const FourVector src = inv.act(k);
        const double ky = minkowski(k, element.translation);
        const double theta = wigner_phase(element.lorentz, k);
        for (int np = 0; np <= t.n_max(); ++np)
            for (int nm = 0; nm <= t.n_max(); ++nm) {
                out(i, np, nm) = std::polar(1.0, ky * (np + nm + c) + 2.0 * (np - nm) * theta) *
                                 evaluator(src, np, nm);
                reference(i, np, nm) = evaluator(k, np, nm);
            }
    }
    const double dev = std::abs(norm_squared(grid, out) - norm_squared(grid, reference));
    return {std::move(out), dev};
}

PolarizedAmplitude transport_amplitude(const MomentumGrid& grid, const PoincareElement& element,
                                       const PolarizedAmplitude& f) {
    // Lambda p_j = k_i exactly when p(i) = j.
    const auto perm = grid_permutation(grid, element.lorentz);
    PolarizedAmplitude out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const FourVector& k = grid.point(i);
        const double theta = wigner_phase(element.lorentz, k);
        const double ky = minkowski(k, element.translation);
        for (Helicity s : kHelicities)
            out(perm[i], s) = f(i, s) * std::polar(1.0, -2.0 * sign_of(s) * theta - ky);
    }
    return out;
}

double covariance_check(const MomentumGrid& grid, const PoincareElement& element,
                        const PolarizedAmplitude& f, const PolarizedAmplitude& g,
                        FockTruncation t, std::size_t oscillators, Picture picture) {
    const LocalMap u = transform_map(grid, element, picture, t);
    const LocalMap ud = transform_map(grid, element, picture, t, true);
    const auto a = CollectiveOp::annihilation(f);
    const auto a_moved = CollectiveOp::annihilation(transport_amplitude(grid, element, f));
    const auto c = CollectiveOp::creation(g);
    const auto c_moved = CollectiveOp::creation(transport_amplitude(grid, element, g));
    double worst = 0.0;
    for (const auto& [op, moved] : {std::pair{a, a_moved}, std::pair{c, c_moved}}) {
        worst = std::max(worst, max_matrix_element_residual(
                                    grid, oscillators, t, t.n_max() - 1,
                                    [&](const EnsembleState& psi) {
                                        EnsembleState r = apply_to_every_factor(
                                            ud, apply_collective(grid, op,
                                                                 apply_to_every_factor(u, psi)));
                                        r -= apply_collective(grid, moved, psi);
                                        return r;
                                    }));
    }
    return worst;
}

double ibar_covariance_residual(const MomentumGrid& grid, const PoincareElement& element,
                                std::span<const cplx> g, FockTruncation t,
                                std::size_t oscillators) {
    if (g.size() != grid.size()) throw std::invalid_argument("ibar_covariance: shape mismatch");
    const auto perm = grid_permutation(grid, element.lorentz);
    std::vector<cplx> moved(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) moved[perm[i]] = g[i];
    const LocalMap u = transform_map(grid, element, Picture::vacuum, t);
    const LocalMap ud = transform_map(grid, element, Picture::vacuum, t, true);
    const auto ib = CollectiveOp::ibar(std::vector<cplx>(g.begin(), g.end()));
    const auto ib_moved = CollectiveOp::ibar(moved);
    return max_matrix_element_residual(grid, oscillators, t, t.n_max() - 1,
                                       [&](const EnsembleState& psi) {
                                           EnsembleState r = apply_to_every_factor(
                                               ud, apply_collective(grid, ib,
                                                                    apply_to_every_factor(u, psi)));
                                           r -= apply_collective(grid, ib_moved, psi);
                                           return r;
                                       });
}

}  // namespace rcr
