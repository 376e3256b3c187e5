#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "rcr/grid.hpp"
#include "rcr/oscillator.hpp"

namespace rcr::test {

/// Points on rays given by 3-momenta, with explicit weights.
inline MomentumGrid explicit_grid(std::vector<std::array<double, 3>> momenta,
                                  std::vector<double> weights) {
    return MomentumGrid::from_momenta(momenta, weights);
}

/// k = (1,0,0,1), w = 1.
inline MomentumGrid one_point_grid() { return explicit_grid({{0, 0, 1}}, {1.0}); }

/// k = (1,0,0,1) and (2,0,0,2), unit weights.
inline MomentumGrid two_point_grid() { return explicit_grid({{0, 0, 1}, {0, 0, 2}}, {1.0, 1.0}); }

inline MomentumGrid small_built_grid(int radial, int polar, int azimuthal) {
    GridSpec s;
    s.k_min = 0.5;
    s.k_max = 2.0;
    s.radial = radial;
    s.polar = polar;
    s.azimuthal = azimuthal;
    return MomentumGrid::build(s);
}

class Random {
public:
    explicit Random(unsigned seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    cplx complex() { return {normal_(engine_), normal_(engine_)}; }

    PolarizedAmplitude amplitude(std::size_t points) {
        PolarizedAmplitude f(points);
        for (auto& v : f.data()) v = complex();
        return f;
    }

    std::vector<cplx> scalars(std::size_t points) {
        std::vector<cplx> g(points);
        for (auto& v : g) v = complex();
        return g;
    }

    /// Random state whose occupations never exceed `level`.
    OscillatorState state(std::size_t points, FockTruncation t, int level) {
        OscillatorState s(points, t);
        for (std::size_t i = 0; i < points; ++i)
            for (int np = 0; np <= level; ++np)
                for (int nm = 0; nm <= level; ++nm) s(i, np, nm) = complex();
        return s;
    }

    /// Random null momentum off the negative z-axis.
    FourVector null_momentum() {
        const double k = uniform(0.2, 5.0);
        const double c = uniform(-0.99, 1.0);
        const double phi = uniform(0.0, 2.0 * kPi);
        const double s = std::sqrt(1.0 - c * c);
        return {k, k * s * std::cos(phi), k * s * std::sin(phi), k * c};
    }

    FourVector four_vector(double scale) {
        return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale),
                uniform(-scale, scale)};
    }

    std::mt19937& engine() { return engine_; }

private:
    std::mt19937 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline double max_abs_diff(const Tensor4& a, const Tensor4& b) {
    double r = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r = std::max(r, std::abs(a[i][j] - b[i][j]));
    return r;
}

}  // namespace rcr::test
