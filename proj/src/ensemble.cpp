#include "rcr/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "rcr/kernels.hpp"

namespace rcr {

namespace {

void require_compatible(const EnsembleState& a, const EnsembleState& b) {
    if (a.oscillators() != b.oscillators() || a.points() != b.points() ||
        !(a.truncation() == b.truncation()))
        throw std::invalid_argument("ensemble: state shape mismatch");
}

std::vector<double> local_weights(const MomentumGrid& grid, FockTruncation t) {
    std::vector<double> w(grid.size() * t.block());
    for (std::size_t x = 0; x < w.size(); ++x) w[x] = grid.weight(x / t.block());
    return w;
}

// Product of per-oscillator weights for a dense index.
double index_weight(std::size_t idx, std::size_t local_dim, std::size_t oscillators,
                    const std::vector<double>& lw) {
    double w = 1.0;
    for (std::size_t p = 0; p < oscillators; ++p) {
        w *= lw[idx % local_dim];
        idx /= local_dim;
    }
    return w;
}

std::vector<cplx> kron(const std::vector<OscillatorState>& factors) {
    std::vector<cplx> v(factors.front().data().begin(), factors.front().data().end());
    for (std::size_t p = 1; p < factors.size(); ++p) {
        const auto f = factors[p].data();
        std::vector<cplx> next(v.size() * f.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            for (std::size_t j = 0; j < f.size(); ++j) next[i * f.size() + j] = v[i] * f[j];
        v = std::move(next);
    }
    return v;
}

LocalMap displacement_generator_map(const PolarizedAmplitude& beta, FockTruncation t) {
    LocalMap cre = creation_map(beta, t);
    LocalMap ann = annihilation_map(beta, t);
    return [cre, ann](std::span<const cplx> in, std::span<cplx> out) {
        std::vector<cplx> tmp(in.size());
        cre(in, out);
        ann(in, tmp);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] -= tmp[k];
    };
}

double generator_bound(const PolarizedAmplitude& beta, FockTruncation t) {
    double worst = 0.0;
    for (std::size_t i = 0; i < beta.points(); ++i)
        worst = std::max(worst, std::abs(beta(i, Helicity::plus)) +
                                    std::abs(beta(i, Helicity::minus)));
    return 2.0 * std::sqrt(double(t.n_max())) * worst;
}

double l2(std::span<const cplx> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

// exp(G) v with ||G|| <= bound, by Taylor series over substeps of size <= 1/2.
std::vector<cplx> taylor_exp(const std::function<void(std::span<const cplx>, std::span<cplx>)>& gen,
                             std::vector<cplx> v, double bound, double tol) {
    const int steps = std::max(1, static_cast<int>(std::ceil(bound / 0.5)));
    const double h = 1.0 / steps;
    std::vector<cplx> term(v.size()), next(v.size());
    for (int s = 0; s < steps; ++s) {
        term = v;
        const double scale = std::max(l2(v), std::numeric_limits<double>::min());
        for (int k = 1; k < 200; ++k) {
            gen(term, next);
            const double c = h / k;
            for (std::size_t x = 0; x < v.size(); ++x) {
                term[x] = c * next[x];
                v[x] += term[x];
            }
            if (l2(term) <= tol * scale) break;
        }
    }
    return v;
}

std::vector<double> convolve(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

}  // namespace

std::size_t dense_dimension(std::size_t local_dim, std::size_t oscillators, std::size_t cap) {
    std::size_t total = 1;
    for (std::size_t p = 0; p < oscillators; ++p) {
        if (total > cap / local_dim)
            throw CapacityError("dense ensemble of " + std::to_string(oscillators) +
                                " oscillators with local dimension " +
                                std::to_string(local_dim) + " exceeds the cap of " +
                                std::to_string(cap) + " amplitudes");
        total *= local_dim;
    }
    return total;
}

EnsembleState EnsembleState::product(std::vector<OscillatorState> factors) {
    if (factors.empty()) throw std::invalid_argument("ensemble: need at least one oscillator");
    for (const auto& f : factors)
        if (f.points() != factors.front().points() ||
            !(f.truncation() == factors.front().truncation()))
            throw std::invalid_argument("ensemble: factors differ in shape");
    const std::size_t n = factors.size();
    const std::size_t points = factors.front().points();
    const FockTruncation t = factors.front().truncation();
    return EnsembleState(n, points, t, std::move(factors));
}

EnsembleState EnsembleState::dense(std::size_t oscillators, std::size_t points, FockTruncation t,
                                   std::vector<cplx> amplitudes) {
    if (oscillators == 0) throw std::invalid_argument("ensemble: need at least one oscillator");
    const std::size_t dim =
        dense_dimension(points * t.block(), oscillators, std::numeric_limits<std::size_t>::max());
    if (amplitudes.size() != dim) throw std::invalid_argument("ensemble: dense size mismatch");
    return EnsembleState(oscillators, points, t, Dense{std::move(amplitudes)});
}

EnsembleState EnsembleState::zeros(std::size_t oscillators, std::size_t points, FockTruncation t,
                                   std::size_t cap) {
    const std::size_t dim = dense_dimension(points * t.block(), oscillators, cap);
    return dense(oscillators, points, t, std::vector<cplx>(dim));
}

const std::vector<OscillatorState>& EnsembleState::factors() const {
    if (is_dense()) throw std::logic_error("ensemble: state is dense, not a product");
    return std::get<Product>(form_);
}

std::span<const cplx> EnsembleState::amplitudes() const {
    if (!is_dense()) throw std::logic_error("ensemble: state is a product; densify first");
    return std::get<Dense>(form_).amplitudes;
}

std::span<cplx> EnsembleState::amplitudes() {
    if (!is_dense()) throw std::logic_error("ensemble: state is a product; densify first");
    return std::get<Dense>(form_).amplitudes;
}

EnsembleState EnsembleState::densify(std::size_t cap) const {
    if (is_dense()) {
        dense_dimension(local_dimension(), oscillators_, cap);
        return *this;
    }
    dense_dimension(local_dimension(), oscillators_, cap);
    return dense(oscillators_, points_, truncation_, kron(std::get<Product>(form_)));
}

EnsembleState& EnsembleState::operator+=(const EnsembleState& other) {
    require_compatible(*this, other);
    auto a = amplitudes();
    auto b = other.amplitudes();
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    return *this;
}

EnsembleState& EnsembleState::operator-=(const EnsembleState& other) {
    require_compatible(*this, other);
    auto a = amplitudes();
    auto b = other.amplitudes();
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
    return *this;
}

EnsembleState& EnsembleState::operator*=(cplx factor) {
    if (is_dense()) {
        for (auto& a : std::get<Dense>(form_).amplitudes) a *= factor;
    } else {
        std::get<Product>(form_).front() *= factor;
    }
    return *this;
}

cplx inner_product(const MomentumGrid& grid, const EnsembleState& a, const EnsembleState& b,
                   std::size_t cap) {
    require_compatible(a, b);
    if (a.points() != grid.size()) throw std::invalid_argument("ensemble: grid mismatch");
    if (!a.is_dense() && !b.is_dense()) {
        cplx s{1.0, 0.0};
        for (std::size_t p = 0; p < a.oscillators(); ++p)
            s *= inner_product(grid, a.factors()[p], b.factors()[p]);
        return s;
    }
    const EnsembleState da = a.densify(cap);
    const EnsembleState db = b.densify(cap);
    const auto lw = local_weights(grid, a.truncation());
    const std::size_t D = a.local_dimension();
    const std::size_t N = a.oscillators();
    const auto va = da.amplitudes();
    const auto vb = db.amplitudes();
    return parallel::reduce<cplx>(va.size(), [&](std::size_t idx) {
        return index_weight(idx, D, N, lw) * std::conj(va[idx]) * vb[idx];
    });
}

double norm_squared(const MomentumGrid& grid, const EnsembleState& a, std::size_t cap) {
    return inner_product(grid, a, a, cap).real();
}

EnsembleState ensemble_vacuum(const VacuumProfile& profile, std::size_t oscillators,
                              FockTruncation t) {
    if (oscillators == 0) throw std::invalid_argument("ensemble_vacuum: N must be >= 1");
    return EnsembleState::product(
        std::vector<OscillatorState>(oscillators, vacuum_state(profile, t)));
}

CollectiveOp CollectiveOp::annihilation(PolarizedAmplitude f) {
    CollectiveOp op;
    op.kind = Kind::annihilation;
    op.f = std::move(f);
    return op;
}

CollectiveOp CollectiveOp::creation(PolarizedAmplitude f) {
    CollectiveOp op;
    op.kind = Kind::creation;
    op.f = std::move(f);
    return op;
}

CollectiveOp CollectiveOp::ibar(std::vector<cplx> g) {
    CollectiveOp op;
    op.kind = Kind::ibar;
    op.g = std::move(g);
    return op;
}

CollectiveOp CollectiveOp::four_momentum(const FourVector& x, Picture picture) {
    CollectiveOp op;
    op.kind = Kind::four_momentum;
    op.x = x;
    op.picture = picture;
    return op;
}

CollectiveOp CollectiveOp::number() { return CollectiveOp{}; }

EnsembleState apply_collective(const MomentumGrid& grid, const CollectiveOp& op,
                               const EnsembleState& state, std::size_t cap) {
    if (state.points() != grid.size()) throw std::invalid_argument("apply_collective: grid mismatch");
    const FockTruncation t = state.truncation();
    const double N = static_cast<double>(state.oscillators());
    LocalMap map;
    double scale = 1.0;
    switch (op.kind) {
        case CollectiveOp::Kind::annihilation:
        case CollectiveOp::Kind::creation:
            if (op.f.points() != grid.size())
                throw std::invalid_argument("apply_collective: amplitude shape mismatch");
            map = op.kind == CollectiveOp::Kind::annihilation ? annihilation_map(op.f, t)
                                                              : creation_map(op.f, t);
            scale = 1.0 / std::sqrt(N);
            break;
        case CollectiveOp::Kind::ibar:
            if (op.g.size() != grid.size())
                throw std::invalid_argument("apply_collective: weight shape mismatch");
            map = ik_map(op.g, t);
            scale = 1.0 / N;
            break;
        case CollectiveOp::Kind::four_momentum:
            map = four_momentum_map(grid, op.x, op.picture, t);
            break;
        case CollectiveOp::Kind::number:
            map = number_map(grid.size(), t);
            break;
    }
    const EnsembleState in = state.densify(cap);
    EnsembleState out = EnsembleState::zeros(state.oscillators(), state.points(), t, cap);
    for (std::size_t p = 0; p < state.oscillators(); ++p)
        parallel::accumulate_along_axis(in.amplitudes(), out.amplitudes(),
                                        state.local_dimension(), state.oscillators(), p, map,
                                        scale);
    return out;
}

EnsembleState apply_to_every_factor(const LocalMap& map, const EnsembleState& state,
                                    std::size_t cap) {
    if (!state.is_dense()) {
        std::vector<OscillatorState> factors;
        for (const auto& f : state.factors()) factors.push_back(apply_map(map, f));
        return EnsembleState::product(std::move(factors));
    }
    EnsembleState cur = state;
    for (std::size_t p = 0; p < state.oscillators(); ++p) {
        EnsembleState next = EnsembleState::zeros(state.oscillators(), state.points(),
                                                  state.truncation(), cap);
        parallel::accumulate_along_axis(cur.amplitudes(), next.amplitudes(),
                                        state.local_dimension(), state.oscillators(), p, map,
                                        1.0);
        cur = std::move(next);
    }
    return cur;
}

cplx multiphoton_product_bruteforce(const MomentumGrid& grid,
                                    std::span<const PolarizedAmplitude> fs,
                                    std::span<const PolarizedAmplitude> gs,
                                    const VacuumProfile& profile, std::size_t oscillators,
                                    FockTruncation t, std::size_t cap) {
    const auto needed = static_cast<int>(std::max(fs.size(), gs.size()));
    if (t.n_max() < needed)
        throw TruncationError("multiphoton_product_bruteforce: n_max = " +
                              std::to_string(t.n_max()) + " cannot hold " +
                              std::to_string(needed) + " excitations");
    dense_dimension(grid.size() * t.block(), oscillators, cap);
    const EnsembleState vac = ensemble_vacuum(profile, oscillators, t).densify(cap);
    auto build = [&](std::span<const PolarizedAmplitude> amps) {
        EnsembleState s = vac;
        for (const auto& a : amps) s = apply_collective(grid, CollectiveOp::creation(a), s, cap);
        return s;
    };
    return inner_product(grid, build(fs), build(gs), cap);
}

EnsembleCoherent ensemble_coherent(const VacuumProfile& profile, CoherentSpec alpha,
                                   std::size_t oscillators) {
    if (oscillators == 0) throw std::invalid_argument("ensemble_coherent: N must be >= 1");
    if (alpha.alpha.points() != profile.size())
        throw std::invalid_argument("ensemble_coherent: shape mismatch");
    return EnsembleCoherent{profile, std::move(alpha), oscillators};
}

EnsembleState materialize(const MomentumGrid& grid, const EnsembleCoherent& state,
                          FockTruncation t, double tail_tolerance) {
    CoherentSpec per_factor{(1.0 / std::sqrt(double(state.oscillators))) * state.alpha.alpha};
    const OscillatorState factor =
        coherent_state(grid, state.profile, per_factor, t, tail_tolerance);
    return EnsembleState::product(std::vector<OscillatorState>(state.oscillators, factor));
}

EnsembleCoherent displacement_apply(const MomentumGrid& grid, const CoherentSpec& beta,
                                    const EnsembleCoherent& state) {
    if (beta.alpha.points() != grid.size() || state.profile.size() != grid.size())
        throw std::invalid_argument("displacement_apply: shape mismatch");
    const double N = static_cast<double>(state.oscillators);
    std::vector<cplx> o(state.profile.amplitudes().begin(), state.profile.amplitudes().end());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double phase = 0.0;
        for (Helicity s : kHelicities)
            phase += std::imag(beta.alpha(i, s) * std::conj(state.alpha.alpha(i, s)));
        o[i] *= std::polar(1.0, phase / N);
    }
    return EnsembleCoherent{VacuumProfile::from_amplitudes(grid, std::move(o)),
                            CoherentSpec{state.alpha.alpha + beta.alpha}, state.oscillators};
}

EnsembleState displacement_apply(const MomentumGrid& grid, const CoherentSpec& beta,
                                 const EnsembleState& state, const DisplacementOptions& opts) {
    if (beta.alpha.points() != grid.size() || state.points() != grid.size())
        throw std::invalid_argument("displacement_apply: shape mismatch");
    const FockTruncation t = state.truncation();
    const double N = static_cast<double>(state.oscillators());
    const LocalMap gen = displacement_generator_map(beta.alpha, t);
    const double local_bound = generator_bound(beta.alpha, t);

    if (!state.is_dense()) {
        const double scale = 1.0 / std::sqrt(N);
        auto scaled = [&](std::span<const cplx> in, std::span<cplx> out) {
            gen(in, out);
            for (auto& v : out) v *= scale;
        };
        std::vector<OscillatorState> factors;
        factors.reserve(state.oscillators());
        for (const auto& f : state.factors()) {
            OscillatorState g(f.points(), t);
            const auto v = taylor_exp(scaled, {f.data().begin(), f.data().end()},
                                      local_bound * scale, opts.term_tolerance);
            std::copy(v.begin(), v.end(), g.data().begin());
            factors.push_back(std::move(g));
        }
        return EnsembleState::product(std::move(factors));
    }

    dense_dimension(state.local_dimension(), state.oscillators(), opts.cap);
    const std::size_t D = state.local_dimension();
    const std::size_t n = state.oscillators();
    const double scale = 1.0 / std::sqrt(N);
    auto collective = [&](std::span<const cplx> in, std::span<cplx> out) {
        std::fill(out.begin(), out.end(), cplx{});
        for (std::size_t p = 0; p < n; ++p)
            parallel::accumulate_along_axis(in, out, D, n, p, gen, scale);
    };
    auto v = taylor_exp(collective, {state.amplitudes().begin(), state.amplitudes().end()},
                        local_bound * std::sqrt(N), opts.term_tolerance);
    return EnsembleState::dense(n, state.points(), t, std::move(v));
}

std::vector<double> excitation_distribution(const MomentumGrid& grid, const EnsembleState& state,
                                            std::size_t cap) {
    if (state.points() != grid.size())
        throw std::invalid_argument("excitation_distribution: grid mismatch");
    if (!state.is_dense()) {
        std::vector<double> dist{1.0};
        for (const auto& f : state.factors()) dist = convolve(dist, excitation_distribution(grid, f));
        return dist;
    }
    dense_dimension(state.local_dimension(), state.oscillators(), cap);
    const FockTruncation t = state.truncation();
    const std::size_t D = state.local_dimension();
    const std::size_t N = state.oscillators();
    const int L = t.levels();
    const auto lw = local_weights(grid, t);
    std::vector<double> dist(N * 2 * static_cast<std::size_t>(t.n_max()) + 1, 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t idx = 0; idx < amps.size(); ++idx) {
        std::size_t rest = idx, occupation = 0;
        double w = 1.0;
        for (std::size_t p = 0; p < N; ++p) {
            const std::size_t x = rest % D;
            rest /= D;
            const std::size_t in_block = x % t.block();
            occupation += in_block / L + in_block % L;
            w *= lw[x];
        }
        dist[occupation] += w * std::norm(amps[idx]);
    }
    return dist;
}

std::vector<double> poisson_pmf(double lambda, std::size_t length) {
    std::vector<double> p(length, 0.0);
    if (length == 0) return p;
    p[0] = std::exp(-lambda);
    for (std::size_t n = 1; n < length; ++n) p[n] = p[n - 1] * lambda / double(n);
    return p;
}

double total_variation(std::span<const double> p, std::span<const double> q_full) {
    double diff = 0.0, q_inside = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
        const double q = n < q_full.size() ? q_full[n] : 0.0;
        diff += std::abs(p[n] - q);
        q_inside += q;
    }
    return 0.5 * diff + 0.5 * std::max(0.0, 1.0 - q_inside);
}

PoissonComparison compare_with_poisson(const MomentumGrid& grid, const VacuumProfile& profile,
                                       const CoherentSpec& alpha, std::size_t oscillators,
                                       FockTruncation t, double tail_tolerance) {
    PoissonComparison out;
    out.lambda = parallel::reduce<double>(grid.size(), [&](std::size_t i) {
        return grid.weight(i) * profile.density(i) *
               (std::norm(alpha.alpha(i, Helicity::plus)) +
                std::norm(alpha.alpha(i, Helicity::minus)));
    });
    const EnsembleState s =
        materialize(grid, ensemble_coherent(profile, alpha, oscillators), t, tail_tolerance);
    out.distribution = excitation_distribution(grid, s);
    out.total_variation =
        total_variation(out.distribution, poisson_pmf(out.lambda, out.distribution.size()));
    return out;
}

std::vector<std::size_t> low_occupation_indices(std::size_t points, FockTruncation t,
                                                std::size_t oscillators, int level) {
    const int L = t.levels();
    std::vector<std::size_t> local;
    for (std::size_t i = 0; i < points; ++i)
        for (int np = 0; np <= std::min(level, t.n_max()); ++np)
            for (int nm = 0; nm <= std::min(level, t.n_max()); ++nm)
                local.push_back((i * L + np) * L + nm);
    const std::size_t D = points * t.block();
    std::vector<std::size_t> out{0};
    for (std::size_t p = 0; p < oscillators; ++p) {
        std::vector<std::size_t> next;
        next.reserve(out.size() * local.size());
        for (auto o : out)
            for (auto x : local) next.push_back(o * D + x);
        out = std::move(next);
    }
    return out;
}

double max_matrix_element_residual(
    const MomentumGrid& grid, std::size_t oscillators, FockTruncation t, int level,
    const std::function<EnsembleState(const EnsembleState&)>& residual, std::size_t cap) {
    const auto basis = low_occupation_indices(grid.size(), t, oscillators, level);
    const auto lw = local_weights(grid, t);
    const std::size_t D = grid.size() * t.block();
    double worst = 0.0;
    for (auto b : basis) {
        EnsembleState ket = EnsembleState::zeros(oscillators, grid.size(), t, cap);
        const double wb = index_weight(b, D, oscillators, lw);
        ket.amplitudes()[b] = 1.0 / std::sqrt(wb);
        const EnsembleState r = residual(ket).densify(cap);
        const auto amps = r.amplitudes();
        for (auto a : basis)
            worst = std::max(worst, std::sqrt(index_weight(a, D, oscillators, lw)) *
                                        std::abs(amps[a]));
    }
    return worst;
}

double ccr_residual(const MomentumGrid& grid, const PolarizedAmplitude& f,
                    const PolarizedAmplitude& g, std::size_t oscillators, FockTruncation t) {
    std::vector<cplx> h(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (Helicity s : kHelicities) h[i] += std::conj(f(i, s)) * g(i, s);
    const auto a = CollectiveOp::annihilation(f);
    const auto c = CollectiveOp::creation(g);
    const auto ib = CollectiveOp::ibar(h);
    return max_matrix_element_residual(grid, oscillators, t, t.n_max() - 1,
                                       [&](const EnsembleState& psi) {
                                           EnsembleState r = apply_collective(
                                               grid, a, apply_collective(grid, c, psi));
                                           r -= apply_collective(grid, c,
                                                                 apply_collective(grid, a, psi));
                                           r -= apply_collective(grid, ib, psi);
                                           return r;
                                       });
}

double centrality_residual(const MomentumGrid& grid, std::span<const cplx> g,
                           const PolarizedAmplitude& f, std::size_t oscillators,
                           FockTruncation t) {
    const auto ib = CollectiveOp::ibar({g.begin(), g.end()});
    double worst = 0.0;
    for (const auto& op : {CollectiveOp::annihilation(f), CollectiveOp::creation(f)}) {
        worst = std::max(worst, max_matrix_element_residual(
                                    grid, oscillators, t, t.n_max() - 1,
                                    [&](const EnsembleState& psi) {
                                        EnsembleState r = apply_collective(
                                            grid, ib, apply_collective(grid, op, psi));
                                        r -= apply_collective(grid, op,
                                                              apply_collective(grid, ib, psi));
                                        return r;
                                    }));
    }
    return worst;
}

double displacement_conjugation_residual(const MomentumGrid& grid, const CoherentSpec& beta,
                                         const PolarizedAmplitude& f, std::size_t oscillators,
                                         FockTruncation t, int level) {
    std::vector<cplx> h(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (Helicity s : kHelicities) h[i] += std::conj(f(i, s)) * beta.alpha(i, s);
    const CoherentSpec minus_beta{-1.0 * beta.alpha};
    const auto a = CollectiveOp::annihilation(f);
    const auto ib = CollectiveOp::ibar(h);
    return max_matrix_element_residual(
        grid, oscillators, t, level, [&](const EnsembleState& psi) {
            EnsembleState r = displacement_apply(
                grid, minus_beta, apply_collective(grid, a, displacement_apply(grid, beta, psi)));
            r -= apply_collective(grid, a, psi);
            r -= apply_collective(grid, ib, psi);
            return r;
        });
}

}  // namespace rcr
