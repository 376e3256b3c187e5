// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "rcr/kernels.hpp"

namespace {

using rcr::cplx;

std::vector<cplx> random_vector(std::size_t n, unsigned seed) {
    std::mt19937 engine(seed);
    std::normal_distribution<double> normal;
    std::vector<cplx> v(n);
    for (auto& x : v) x = {normal(engine), normal(engine)};
    return v;
}

template <auto Permanent>
void permanent(benchmark::State& state) {
    const auto m = static_cast<std::size_t>(state.range(0));
    const auto a = random_vector(m * m, 1);
    for (auto _ : state) benchmark::DoNotOptimize(Permanent(a, m));
    state.counters["threads"] = rcr::kernel_threads();
}

// Lowering operator on a (dim)-level oscillator, applied to the middle axis.
void lower(std::span<const cplx> in, std::span<cplx> out) {
    for (std::size_t n = 0; n < in.size(); ++n)
        out[n] = n + 1 < in.size() ? std::sqrt(double(n + 1)) * in[n + 1] : cplx{};
}

template <auto Accumulate>
void axis(benchmark::State& state) {
    const std::size_t dim = 6, factors = static_cast<std::size_t>(state.range(0));
    std::size_t size = 1;
    for (std::size_t f = 0; f < factors; ++f) size *= dim;
    const auto in = random_vector(size, 2);
    std::vector<cplx> out(size);
    for (auto _ : state) {
        Accumulate(in, out, dim, factors, factors / 2, lower, cplx{1.0});
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(size));
}

template <bool Parallel>
void reduce(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto v = random_vector(n, 3);
    const auto term = [&](std::size_t i) { return std::norm(v[i]); };
    for (auto _ : state) {
        double s = Parallel ? rcr::parallel::reduce<double>(n, term) : rcr::serial::reduce<double>(n, term);
        benchmark::DoNotOptimize(s);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

BENCHMARK(permanent<rcr::serial::permanent_ryser>)->Name("permanent/serial")->DenseRange(8, 16, 4);
BENCHMARK(permanent<rcr::parallel::permanent_ryser>)->Name("permanent/parallel")->DenseRange(8, 16, 4);
BENCHMARK(axis<rcr::serial::accumulate_along_axis>)->Name("axis/serial")->DenseRange(4, 7, 1);
BENCHMARK(axis<rcr::parallel::accumulate_along_axis>)->Name("axis/parallel")->DenseRange(4, 7, 1);
BENCHMARK(reduce<false>)->Name("reduce/serial")->Range(1 << 10, 1 << 22);
BENCHMARK(reduce<true>)->Name("reduce/parallel")->Range(1 << 10, 1 << 22);

}  // namespace

BENCHMARK_MAIN();
