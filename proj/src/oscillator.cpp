#include "rcr/oscillator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rcr/io.hpp"

namespace rcr {

namespace {

void require_same_shape(const OscillatorState& a, const OscillatorState& b) {
    if (a.points() != b.points() || !(a.truncation() == b.truncation()))
        throw std::invalid_argument("oscillator: state shape mismatch");
}

void require_points(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) throw std::invalid_argument(std::string(what) + ": shape mismatch");
}

// Upper tail e^{-l} sum_{n > n_max} l^n / n! of a Poisson distribution.
double poisson_upper_tail(double lambda, int n_max) {
    if (lambda == 0.0) return 0.0;
    // For large lambda the direct complement is accurate enough.
    if (lambda > 0.5 * (n_max + 1)) {
        double term = std::exp(-lambda), below = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            below += term;
            term *= lambda / (n + 1);
        }
        return std::max(0.0, 1.0 - below);
    }
    double term = std::exp(-lambda);
    for (int n = 1; n <= n_max + 1; ++n) term *= lambda / n;
    double tail = 0.0;
    for (int n = n_max + 1; term > 1e-300 && n < n_max + 400; ++n) {
        tail += term;
        term *= lambda / (n + 1);
    }
    return tail;
}

}  // namespace

FockTruncation::FockTruncation(int n_max) : n_max_(n_max) {
    if (n_max < 1) throw std::invalid_argument("FockTruncation: n_max must be >= 1");
}

OscillatorState::OscillatorState(std::size_t points, FockTruncation truncation)
    : points_(points), truncation_(truncation), amplitudes_(points * truncation.block(), cplx{}) {}

OscillatorState OscillatorState::basis(const MomentumGrid& grid, FockTruncation truncation,
                                       std::size_t i, int n_plus, int n_minus) {
    if (i >= grid.size()) throw std::out_of_range("basis: grid index out of range");
    if (n_plus < 0 || n_minus < 0 || n_plus > truncation.n_max() || n_minus > truncation.n_max())
        throw TruncationError("basis: occupation outside the truncation");
    OscillatorState s(grid.size(), truncation);
    s(i, n_plus, n_minus) = 1.0 / grid.weight(i);
    return s;
}

OscillatorState& OscillatorState::operator+=(const OscillatorState& other) {
    require_same_shape(*this, other);
    for (std::size_t k = 0; k < amplitudes_.size(); ++k) amplitudes_[k] += other.amplitudes_[k];
    return *this;
}

OscillatorState& OscillatorState::operator-=(const OscillatorState& other) {
    require_same_shape(*this, other);
    for (std::size_t k = 0; k < amplitudes_.size(); ++k) amplitudes_[k] -= other.amplitudes_[k];
    return *this;
}

OscillatorState& OscillatorState::operator*=(cplx factor) {
    for (auto& a : amplitudes_) a *= factor;
    return *this;
}

bool OscillatorState::supported_below(int level) const {
    const int L = truncation_.levels();
    for (std::size_t i = 0; i < points_; ++i)
        for (int np = 0; np < L; ++np)
            for (int nm = 0; nm < L; ++nm)
                if ((np > level || nm > level) && (*this)(i, np, nm) != cplx{}) return false;
    return true;
}

OscillatorState operator+(OscillatorState a, const OscillatorState& b) {
    a += b;
    return a;
}

OscillatorState operator-(OscillatorState a, const OscillatorState& b) {
    a -= b;
    return a;
}

OscillatorState operator*(cplx factor, OscillatorState a) {
    a *= factor;
    return a;
}

cplx inner_product(const MomentumGrid& grid, const OscillatorState& a, const OscillatorState& b) {
    require_same_shape(a, b);
    require_points(grid.size(), a.points(), "inner_product");
    const std::size_t block = a.truncation().block();
    return parallel::reduce<cplx>(grid.size(), [&](std::size_t i) {
        cplx s{};
        for (std::size_t k = i * block; k < (i + 1) * block; ++k)
            s += std::conj(a.data()[k]) * b.data()[k];
        return grid.weight(i) * s;
    });
}

double norm_squared(const MomentumGrid& grid, const OscillatorState& a) {
    return inner_product(grid, a, a).real();
}

double max_weighted_difference(const MomentumGrid& grid, const OscillatorState& a,
                               const OscillatorState& b) {
    require_same_shape(a, b);
    require_points(grid.size(), a.points(), "max_weighted_difference");
    const std::size_t block = a.truncation().block();
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double s = std::sqrt(grid.weight(i));
        for (std::size_t k = i * block; k < (i + 1) * block; ++k)
            worst = std::max(worst, s * std::abs(a.data()[k] - b.data()[k]));
    }
    return worst;
}

LocalMap annihilation_map(const PolarizedAmplitude& f, FockTruncation t) {
    return [f, t](std::span<const cplx> in, std::span<cplx> out) {
        const int L = t.levels();
        const std::size_t block = t.block();
        for (std::size_t i = 0; i < f.points(); ++i) {
            const cplx fp = std::conj(f(i, Helicity::plus));
            const cplx fm = std::conj(f(i, Helicity::minus));
            const std::size_t base = i * block;
            for (int np = 0; np < L; ++np) {
                for (int nm = 0; nm < L; ++nm) {
                    cplx v{};
                    if (np + 1 < L)
                        v += fp * std::sqrt(double(np + 1)) * in[base + (np + 1) * L + nm];
                    if (nm + 1 < L)
                        v += fm * std::sqrt(double(nm + 1)) * in[base + np * L + nm + 1];
                    out[base + np * L + nm] = v;
                }
            }
        }
    };
}

LocalMap creation_map(const PolarizedAmplitude& f, FockTruncation t) {
    return [f, t](std::span<const cplx> in, std::span<cplx> out) {
        const int L = t.levels();
        const std::size_t block = t.block();
        for (std::size_t i = 0; i < f.points(); ++i) {
            const cplx fp = f(i, Helicity::plus);
            const cplx fm = f(i, Helicity::minus);
            const std::size_t base = i * block;
            for (int np = 0; np < L; ++np) {
                for (int nm = 0; nm < L; ++nm) {
                    cplx v{};
                    if (np > 0) v += fp * std::sqrt(double(np)) * in[base + (np - 1) * L + nm];
                    if (nm > 0) v += fm * std::sqrt(double(nm)) * in[base + np * L + nm - 1];
                    out[base + np * L + nm] = v;
                }
            }
        }
    };
}

LocalMap ik_map(std::span<const cplx> g, FockTruncation t) {
    std::vector<cplx> values(g.begin(), g.end());
    return [values = std::move(values), t](std::span<const cplx> in, std::span<cplx> out) {
        const std::size_t block = t.block();
        for (std::size_t i = 0; i < values.size(); ++i)
            for (std::size_t k = i * block; k < (i + 1) * block; ++k) out[k] = values[i] * in[k];
    };
}

namespace {

// Multiplication by d(i, n+ + n-), tabulated per point and total occupation.
LocalMap diagonal_map(std::vector<cplx> table, std::size_t points, FockTruncation t) {
    return [table = std::move(table), points, t](std::span<const cplx> in, std::span<cplx> out) {
        const int L = t.levels();
        const std::size_t span = 2 * static_cast<std::size_t>(t.n_max()) + 1;
        for (std::size_t i = 0; i < points; ++i)
            for (int np = 0; np < L; ++np)
                for (int nm = 0; nm < L; ++nm) {
                    const std::size_t k = (i * L + np) * L + nm;
                    out[k] = table[i * span + np + nm] * in[k];
                }
    };
}

}  // namespace

LocalMap number_map(std::size_t points, FockTruncation t) {
    const std::size_t span = 2 * static_cast<std::size_t>(t.n_max()) + 1;
    std::vector<cplx> table(points * span);
    for (std::size_t i = 0; i < points; ++i)
        for (std::size_t n = 0; n < span; ++n) table[i * span + n] = double(n);
    return diagonal_map(std::move(table), points, t);
}

LocalMap four_momentum_map(const MomentumGrid& grid, const FourVector& x, Picture picture,
                           FockTruncation t) {
    const std::size_t span = 2 * static_cast<std::size_t>(t.n_max()) + 1;
    const double zero_point = picture == Picture::physical ? 1.0 : 0.0;
    std::vector<cplx> table(grid.size() * span);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double kx = minkowski(grid.point(i), x);
        for (std::size_t n = 0; n < span; ++n) table[i * span + n] = kx * (double(n) + zero_point);
    }
    return diagonal_map(std::move(table), grid.size(), t);
}

LocalMap translation_map(const MomentumGrid& grid, const FourVector& x, Picture picture,
                         FockTruncation t) {
    const std::size_t span = 2 * static_cast<std::size_t>(t.n_max()) + 1;
    const double zero_point = picture == Picture::physical ? 1.0 : 0.0;
    std::vector<cplx> table(grid.size() * span);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double kx = minkowski(grid.point(i), x);
        for (std::size_t n = 0; n < span; ++n)
            table[i * span + n] = std::polar(1.0, kx * (double(n) + zero_point));
    }
    return diagonal_map(std::move(table), grid.size(), t);
}

OscillatorState apply_map(const LocalMap& map, const OscillatorState& state) {
    OscillatorState out(state.points(), state.truncation());
    map(state.data(), out.data());
    return out;
}

OscillatorState vacuum_state(const VacuumProfile& profile, FockTruncation t) {
    OscillatorState s(profile.size(), t);
    for (std::size_t i = 0; i < profile.size(); ++i) s(i, 0, 0) = profile.amplitude(i);
    return s;
}

OscillatorState apply_annihilation(const PolarizedAmplitude& f, const OscillatorState& state) {
    require_points(state.points(), f.points(), "apply_annihilation");
    return apply_map(annihilation_map(f, state.truncation()), state);
}

OscillatorState apply_creation(const PolarizedAmplitude& f, const OscillatorState& state) {
    require_points(state.points(), f.points(), "apply_creation");
    return apply_map(creation_map(f, state.truncation()), state);
}

OscillatorState apply_ik(std::span<const cplx> g, const OscillatorState& state) {
    require_points(state.points(), g.size(), "apply_ik");
    return apply_map(ik_map(g, state.truncation()), state);
}

OscillatorState apply_number(const OscillatorState& state) {
    return apply_map(number_map(state.points(), state.truncation()), state);
}

OscillatorState apply_four_momentum(const MomentumGrid& grid, const FourVector& x,
                                    const OscillatorState& state, Picture picture) {
    require_points(grid.size(), state.points(), "apply_four_momentum");
    return apply_map(four_momentum_map(grid, x, picture, state.truncation()), state);
}

OscillatorState translate(const MomentumGrid& grid, const FourVector& x,
                          const OscillatorState& state, Picture picture) {
    require_points(grid.size(), state.points(), "translate");
    return apply_map(translation_map(grid, x, picture, state.truncation()), state);
}

double coherent_tail_mass(const MomentumGrid& grid, const VacuumProfile& profile,
                          const CoherentSpec& spec, FockTruncation t) {
    require_points(grid.size(), spec.alpha.points(), "coherent_tail_mass");
    require_points(grid.size(), profile.size(), "coherent_tail_mass");
    return parallel::reduce<double>(grid.size(), [&](std::size_t i) {
        const double tp = poisson_upper_tail(std::norm(spec.alpha(i, Helicity::plus)), t.n_max());
        const double tm = poisson_upper_tail(std::norm(spec.alpha(i, Helicity::minus)), t.n_max());
        return grid.weight(i) * profile.density(i) * (tp + tm - tp * tm);
    });
}

OscillatorState coherent_state(const MomentumGrid& grid, const VacuumProfile& profile,
                               const CoherentSpec& spec, FockTruncation t,
                               double tail_tolerance) {
    if (!spec.alpha.all_finite()) throw std::invalid_argument("coherent_state: non-finite alpha");
    const double tail = coherent_tail_mass(grid, profile, spec, t);
    if (tail > tail_tolerance)
        throw TruncationError("coherent_state: truncated tail mass " + io::format_number(tail) +
                              " exceeds " + io::format_number(tail_tolerance));

    const int L = t.levels();
    OscillatorState s(grid.size(), t);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const cplx ap = spec.alpha(i, Helicity::plus);
        const cplx am = spec.alpha(i, Helicity::minus);
        const double damping = std::exp(-0.5 * (std::norm(ap) + std::norm(am)));
        // c_n = a^n / sqrt(n!)
        std::vector<cplx> cp(L), cm(L);
        cp[0] = cm[0] = 1.0;
        for (int n = 1; n < L; ++n) {
            cp[n] = cp[n - 1] * ap / std::sqrt(double(n));
            cm[n] = cm[n - 1] * am / std::sqrt(double(n));
        }
        const cplx o = profile.amplitude(i) * damping;
        for (int np = 0; np < L; ++np)
            for (int nm = 0; nm < L; ++nm) s(i, np, nm) = o * cp[np] * cm[nm];
    }
    return s;
}

std::vector<double> excitation_distribution(const MomentumGrid& grid,
                                            const OscillatorState& state) {
    require_points(grid.size(), state.points(), "excitation_distribution");
    const int L = state.truncation().levels();
    std::vector<double> p(2 * static_cast<std::size_t>(L) - 1, 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (int np = 0; np < L; ++np)
            for (int nm = 0; nm < L; ++nm)
                p[np + nm] += grid.weight(i) * std::norm(state(i, np, nm));
    return p;
}

}  // namespace rcr
