#include "rcr/fields.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rcr/ensemble.hpp"
#include "rcr/io.hpp"
#include "rcr/kernels.hpp"
#include "rcr/poincare.hpp"

namespace rcr {

namespace {

const cplx kI{0.0, 1.0};

// Metric factor -g^{aa} for the diagonal (+,-,-,-) metric.
double minus_metric(int a) { return -kMetric[a]; }

}  // namespace

FieldVector one_photon_vector(const MomentumGrid& grid, const VacuumProfile& profile,
                              const FourVector& x, FockTruncation t) {
    FieldVector v{{OscillatorState(grid.size(), t), OscillatorState(grid.size(), t),
                   OscillatorState(grid.size(), t), OscillatorState(grid.size(), t)}};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const FourVector& k = grid.point(i);
        const PolarizationFrame frame = polarization_frame(k);
        const CFourVector m = lower(frame.m);
        const CFourVector mb = lower(frame.m_bar);
        const cplx c = -kI * std::polar(1.0, minkowski(k, x)) * profile.amplitude(i);
        for (int a = 0; a < 4; ++a) {
            v.components[a](i, 0, 1) = c * m[a];
            v.components[a](i, 1, 0) = c * mb[a];
        }
    }
    return v;
}

cplx contract_minus_metric(const MomentumGrid& grid, const FieldVector& u, const FieldVector& v) {
    cplx s{};
    for (int a = 0; a < 4; ++a) s += minus_metric(a) * inner_product(grid, u.components[a], v.components[a]);
    return s;
}

cplx two_point_product(const MomentumGrid& grid, const VacuumProfile& profile,
                       const FourVector& x, const FourVector& y) {
    const FourVector d{x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]};
    return 2.0 * parallel::reduce<cplx>(grid.size(), [&](std::size_t i) {
               return grid.weight(i) * profile.density(i) *
                      std::polar(1.0, minkowski(grid.point(i), d));
           });
}

cplx two_point_contraction(const MomentumGrid& grid, const VacuumProfile& profile,
                           const FourVector& x, const FourVector& y) {
    return contract_minus_metric(grid, one_photon_vector(grid, profile, y),
                                 one_photon_vector(grid, profile, x));
}

Tensor4 coherent_field_average(const MomentumGrid& grid, const VacuumProfile& profile,
                               const CoherentSpec& alpha, const FourVector& x) {
    if (alpha.alpha.points() != grid.size())
        throw std::invalid_argument("coherent_field_average: shape mismatch");
    std::vector<cplx> coeff(grid.size());
    std::vector<Tensor4> frames(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double kx = minkowski(grid.point(i), x);
        coeff[i] = grid.weight(i) * profile.density(i) *
                   (alpha.alpha(i, Helicity::minus) * std::polar(1.0, -kx) +
                    std::conj(alpha.alpha(i, Helicity::plus)) * std::polar(1.0, kx));
        frames[i] = polarization_frame(grid.point(i)).e;
    }
    Tensor4 out{};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            out[a][b] = parallel::reduce<cplx>(grid.size(),
                                               [&](std::size_t i) { return coeff[i] * frames[i][a][b]; });
    return out;
}

Tensor4 coherent_field_average_dense(const MomentumGrid& grid, const VacuumProfile& profile,
                                     const CoherentSpec& alpha, const FourVector& x,
                                     std::size_t oscillators, FockTruncation t) {
    const EnsembleState state =
        materialize(grid, ensemble_coherent(profile, alpha, oscillators), t, 1.0);
    Tensor4 out{};
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            PolarizedAmplitude f(grid.size()), g(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const cplx e = polarization_frame(grid.point(i)).e[a][b];
                const cplx phase = std::polar(1.0, minkowski(grid.point(i), x));
                f(i, Helicity::minus) = std::conj(e) * phase;
                g(i, Helicity::plus) = e * phase;
            }
            EnsembleState hit = apply_collective(grid, CollectiveOp::annihilation(f), state);
            hit += apply_collective(grid, CollectiveOp::creation(g), state);
            out[a][b] = inner_product(grid, state, hit);
            out[b][a] = -out[a][b];
        }
    return out;
}

Tensor4 hermitian_field_average(const MomentumGrid& grid, const VacuumProfile& profile,
                                const CoherentSpec& alpha, const FourVector& x) {
    Tensor4 t = coherent_field_average(grid, profile, alpha, x);
    for (auto& row : t)
        for (auto& v : row) v += std::conj(v);
    return t;
}

double antisymmetry_residual(const Tensor4& t) {
    double r = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) r = std::max(r, std::abs(t[a][b] + t[b][a]));
    return r;
}

void write_field_scan(std::ostream& out, const MomentumGrid& grid, const VacuumProfile& profile,
                      const CoherentSpec& alpha, const FourVector& origin,
                      const FourVector& direction, std::span<const double> ts) {
    io::CsvWriter csv(out);
    std::vector<std::string> header{"t"};
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            const std::string name = "F" + std::to_string(a) + std::to_string(b);
            header.push_back(name + "_re");
            header.push_back(name + "_im");
        }
    csv.header(header);
    for (double t : ts) {
        FourVector x;
        for (int a = 0; a < 4; ++a) x[a] = origin[a] + t * direction[a];
        const Tensor4 f = coherent_field_average(grid, profile, alpha, x);
        std::vector<io::Cell> row{t};
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b) {
                row.emplace_back(f[a][b].real());
                row.emplace_back(f[a][b].imag());
            }
        csv.row(row);
    }
}

}  // namespace rcr
