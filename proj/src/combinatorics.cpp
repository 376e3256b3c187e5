#include "rcr/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rcr/kernels.hpp"

namespace rcr {

namespace {

void check_shapes(const MomentumGrid& grid, std::span<const PolarizedAmplitude> fs,
                  std::span<const PolarizedAmplitude> gs, const VacuumProfile& profile) {
    if (profile.size() != grid.size()) throw std::invalid_argument("correlator: profile mismatch");
    for (const auto& f : fs)
        if (f.points() != grid.size()) throw std::invalid_argument("correlator: shape mismatch");
    for (const auto& g : gs)
        if (g.points() != grid.size()) throw std::invalid_argument("correlator: shape mismatch");
}

}  // namespace

std::vector<std::vector<int>> SetPartition::members() const {
    std::vector<std::vector<int>> out(blocks);
    for (std::size_t j = 0; j < block_of.size(); ++j) out[block_of[j]].push_back(int(j));
    return out;
}

std::vector<SetPartition> enumerate_partitions(int m) {
    if (m < 0) throw std::invalid_argument("enumerate_partitions: m must be >= 0");
    std::vector<SetPartition> out;
    if (m == 0) {
        out.push_back({});
        return out;
    }
    std::vector<int> a(m, 0), prefix_max(m, 0);
    while (true) {
        out.push_back({a, prefix_max[m - 1] + 1});
        // Increment the rightmost position that may still grow.
        int j = m - 1;
        while (j > 0 && a[j] == prefix_max[j - 1] + 1) --j;
        if (j == 0) break;
        ++a[j];
        prefix_max[j] = std::max(prefix_max[j - 1], a[j]);
        for (int k = j + 1; k < m; ++k) {
            a[k] = 0;
            prefix_max[k] = prefix_max[k - 1];
        }
    }
    return out;
}

Rational multiplicity_weight(int blocks, int m, std::int64_t N) {
    if (N < 1) throw std::invalid_argument("multiplicity_weight: N must be >= 1");
    if (blocks < 0 || blocks > m) throw std::invalid_argument("multiplicity_weight: bad block count");
    boost::multiprecision::cpp_int num = 1, den = 1;
    for (int t = 0; t < blocks; ++t) num *= (N - t);
    for (int t = 0; t < m; ++t) den *= N;
    if (num < 0) num = 0;  // N < blocks
    return Rational(num, den);
}

Rational class_probability_exact(int m, std::int64_t N, int j) {
    if (m < 1) throw std::invalid_argument("class_probability: m must be >= 1");
    if (j < 0 || j > m - 1)
        throw std::invalid_argument("class_probability: j must lie in [0, m-1]");
    if (N < 1) throw std::invalid_argument("class_probability: N must be >= 1");
    // Stirling number of the second kind S(m, m-j) counts the partitions.
    const int blocks = m - j;
    std::vector<std::vector<boost::multiprecision::cpp_int>> S(
        m + 1, std::vector<boost::multiprecision::cpp_int>(m + 1, 0));
    S[0][0] = 1;
    for (int n = 1; n <= m; ++n)
        for (int k = 1; k <= n; ++k) S[n][k] = k * S[n - 1][k] + S[n - 1][k - 1];
    return Rational(S[m][blocks]) * multiplicity_weight(blocks, m, N);
}

double class_probability(int m, std::int64_t N, int j) {
    return static_cast<double>(class_probability_exact(m, N, j));
}

GramMatrix gram_matrix(const MomentumGrid& grid, std::span<const PolarizedAmplitude> fs,
                       std::span<const PolarizedAmplitude> gs, const VacuumProfile& profile) {
    if (fs.size() != gs.size()) throw std::invalid_argument("gram_matrix: m != m'");
    check_shapes(grid, fs, gs, profile);
    GramMatrix g(fs.size());
    for (std::size_t j = 0; j < fs.size(); ++j)
        for (std::size_t l = 0; l < gs.size(); ++l)
            g(j, l) = inner_product_z(grid, fs[j], gs[l], profile);
    return g;
}

cplx permanent(const GramMatrix& g) { return parallel::permanent_ryser(g.data(), g.order()); }

cplx partition_sum(const MomentumGrid& grid, std::span<const PolarizedAmplitude> fs,
                   std::span<const PolarizedAmplitude> gs, const VacuumProfile& profile,
                   const std::function<double(const SetPartition&)>& weight) {
    if (fs.size() != gs.size()) throw std::invalid_argument("partition_sum: m != m'");
    check_shapes(grid, fs, gs, profile);
    const int m = static_cast<int>(fs.size());
    if (m == 0) return weight(SetPartition{}) * cplx{1.0, 0.0};
    const std::size_t K = grid.size();

    // h[(j*m + l)*K + i]
    std::vector<cplx> h(static_cast<std::size_t>(m) * m * K);
    for (int j = 0; j < m; ++j)
        for (int l = 0; l < m; ++l)
            for (std::size_t i = 0; i < K; ++i) {
                cplx s{};
                for (Helicity hel : kHelicities) s += std::conj(fs[j](i, hel)) * gs[l](i, hel);
                h[(static_cast<std::size_t>(j) * m + l) * K + i] = s;
            }
    std::vector<double> wz(K);
    for (std::size_t i = 0; i < K; ++i) wz[i] = grid.weight(i) * profile.density(i);

    struct WeightedPartition {
        std::vector<std::vector<int>> blocks;
        double weight;
    };
    std::vector<WeightedPartition> parts;
    for (const auto& p : enumerate_partitions(m)) {
        const double w = weight(p);
        if (w != 0.0) parts.push_back({p.members(), w});
    }

    std::vector<std::vector<int>> perms;
    std::vector<int> sigma(m);
    std::iota(sigma.begin(), sigma.end(), 0);
    do perms.push_back(sigma);
    while (std::next_permutation(sigma.begin(), sigma.end()));

    return parallel::reduce<cplx>(perms.size(), [&](std::size_t s) {
        const auto& sg = perms[s];
        cplx total{};
        for (const auto& part : parts) {
            cplx prod{1.0, 0.0};
            for (const auto& block : part.blocks) {
                cplx moment{};
                for (std::size_t i = 0; i < K; ++i) {
                    cplx term = wz[i];
                    for (int j : block) term *= h[(static_cast<std::size_t>(j) * m + sg[j]) * K + i];
                    moment += term;
                }
                prod *= moment;
            }
            total += part.weight * prod;
        }
        return total;
    });
}

cplx finite_n_correlator(const MomentumGrid& grid, std::span<const PolarizedAmplitude> fs,
                         std::span<const PolarizedAmplitude> gs, const VacuumProfile& profile,
                         std::int64_t N) {
    if (N < 1) throw std::invalid_argument("finite_n_correlator: N must be >= 1");
    check_shapes(grid, fs, gs, profile);
    if (fs.size() != gs.size()) return {};
    const int m = static_cast<int>(fs.size());
    std::vector<double> by_blocks(m + 1);
    for (int b = 0; b <= m; ++b) by_blocks[b] = static_cast<double>(multiplicity_weight(b, m, N));
    return partition_sum(grid, fs, gs, profile,
                         [&](const SetPartition& p) { return by_blocks[p.blocks]; });
}

cplx limit_correlator(const MomentumGrid& grid, std::span<const PolarizedAmplitude> fs,
                      std::span<const PolarizedAmplitude> gs, const VacuumProfile& profile,
                      std::size_t cap) {
    check_shapes(grid, fs, gs, profile);
    if (fs.size() != gs.size()) return {};
    if (fs.size() > cap)
        throw CapacityError("limit_correlator: m = " + std::to_string(fs.size()) +
                            " exceeds the exact-permanent cap " + std::to_string(cap));
    return permanent(gram_matrix(grid, fs, gs, profile));
}

std::vector<ConvergenceRow> convergence_study(const MomentumGrid& grid,
                                              std::span<const PolarizedAmplitude> fs,
                                              std::span<const PolarizedAmplitude> gs,
                                              const VacuumProfile& profile,
                                              std::span<const std::int64_t> Ns) {
    const cplx limit = limit_correlator(grid, fs, gs, profile);
    std::vector<ConvergenceRow> rows;
    for (auto N : Ns) {
        const cplx finite = finite_n_correlator(grid, fs, gs, profile, N);
        rows.push_back({N, finite, limit, std::abs(finite - limit)});
    }
    return rows;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_line: need at least two paired samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

LineFit loglog_fit(std::span<const ConvergenceRow> rows) {
    std::vector<double> x, y;
    for (const auto& r : rows) {
        if (!(r.abs_error > 0.0)) throw std::invalid_argument("loglog_fit: non-positive error");
        x.push_back(std::log(double(r.N)));
        y.push_back(std::log(r.abs_error));
    }
    return fit_line(x, y);
}

}  // namespace rcr
