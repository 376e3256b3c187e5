#pragma once

// Data-parallel kernels. Every kernel exists twice: rcr::serial holds the
// straightforward reference used by the tests, rcr::parallel the OpenMP
// version used by the library. Parallel reductions split the index range into
// a fixed number of chunks (independent of the thread count) and combine the
// partials pairwise, so results are bit-identical from run to run.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rcr/types.hpp"

namespace rcr {

/// Linear map on one oscillator's amplitude block. `out` has the same length
/// as `in` and is fully overwritten.
using LocalMap = std::function<void(std::span<const cplx> in, std::span<cplx> out)>;

inline constexpr std::size_t kReductionChunks = 64;

template <class T>
T pairwise_sum(std::span<const T> values) {
    if (values.empty()) return T{};
    if (values.size() <= 8) {
        T s{};
        for (const auto& v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

namespace serial {

template <class T, class Term>
T reduce(std::size_t n, Term&& term) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += term(i);
    return s;
}

/// Ryser inclusion-exclusion over Gray-code-ordered column subsets.
/// `a` is row-major m x m.
cplx permanent_ryser(std::span<const cplx> a, std::size_t m);

/// out += scale * (I x ... x map x ... x I) in, with `map` acting on `axis`
/// of a tensor with `factors` axes of extent `dim` each (axis 0 slowest).
void accumulate_along_axis(std::span<const cplx> in, std::span<cplx> out, std::size_t dim,
                           std::size_t factors, std::size_t axis, const LocalMap& map,
                           cplx scale);

}  // namespace serial

namespace parallel {

template <class T, class Term>
T reduce(std::size_t n, Term&& term) {
    std::vector<T> partial(kReductionChunks, T{});
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < kReductionChunks; ++c) {
        const std::size_t lo = c * n / kReductionChunks;
        const std::size_t hi = (c + 1) * n / kReductionChunks;
        T s{};
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[c] = s;
    }
    return pairwise_sum(std::span<const T>(partial));
}

cplx permanent_ryser(std::span<const cplx> a, std::size_t m);

void accumulate_along_axis(std::span<const cplx> in, std::span<cplx> out, std::size_t dim,
                           std::size_t factors, std::size_t axis, const LocalMap& map,
                           cplx scale);

}  // namespace parallel

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int kernel_threads();

}  // namespace rcr
