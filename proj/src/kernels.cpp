#include "rcr/kernels.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rcr {

namespace {

void check_square(std::span<const cplx> a, std::size_t m) {
    if (a.size() != m * m) throw std::invalid_argument("permanent: matrix is not m x m");
    if (m > 62) throw std::invalid_argument("permanent: order too large for subset enumeration");
}

void check_axis_shapes(std::span<const cplx> in, std::span<cplx> out, std::size_t dim,
                       std::size_t factors, std::size_t axis) {
    std::size_t total = 1;
    for (std::size_t p = 0; p < factors; ++p) total *= dim;
    if (in.size() != total || out.size() != total)
        throw std::invalid_argument("accumulate_along_axis: tensor size mismatch");
    if (axis >= factors) throw std::out_of_range("accumulate_along_axis: axis out of range");
}

struct AxisLayout {
    std::size_t outer = 1;
    std::size_t stride = 1;
};

AxisLayout axis_layout(std::size_t dim, std::size_t factors, std::size_t axis) {
    AxisLayout l;
    for (std::size_t p = 0; p < axis; ++p) l.outer *= dim;
    for (std::size_t p = axis + 1; p < factors; ++p) l.stride *= dim;
    return l;
}

inline std::uint64_t gray(std::uint64_t k) { return k ^ (k >> 1); }

// Partial Ryser sum over Gray-code steps k in [lo, hi), 1 <= lo.
cplx ryser_range(std::span<const cplx> a, std::size_t m, std::uint64_t lo, std::uint64_t hi) {
    std::vector<cplx> row_sum(m, cplx{});
    const std::uint64_t start = gray(lo - 1);
    for (std::size_t j = 0; j < m; ++j)
        if (start >> j & 1U)
            for (std::size_t i = 0; i < m; ++i) row_sum[i] += a[i * m + j];

    cplx total{};
    for (std::uint64_t k = lo; k < hi; ++k) {
        const std::uint64_t g = gray(k);
        const auto j = static_cast<std::size_t>(std::countr_zero(k));
        const double sign = (g >> j & 1U) ? 1.0 : -1.0;
        for (std::size_t i = 0; i < m; ++i) row_sum[i] += sign * a[i * m + j];
        cplx prod{1.0, 0.0};
        for (std::size_t i = 0; i < m; ++i) prod *= row_sum[i];
        const bool odd = std::popcount(g) % 2 == 1;
        total += odd ? -prod : prod;
    }
    return total;
}

}  // namespace

namespace serial {

cplx permanent_ryser(std::span<const cplx> a, std::size_t m) {
    check_square(a, m);
    if (m == 0) return {1.0, 0.0};
    const std::uint64_t subsets = std::uint64_t{1} << m;
    const cplx s = ryser_range(a, m, 1, subsets);
    return (m % 2 == 0) ? s : -s;
}

void accumulate_along_axis(std::span<const cplx> in, std::span<cplx> out, std::size_t dim,
                           std::size_t factors, std::size_t axis, const LocalMap& map,
                           cplx scale) {
    check_axis_shapes(in, out, dim, factors, axis);
    const AxisLayout l = axis_layout(dim, factors, axis);
    std::vector<cplx> src(dim), dst(dim);
    for (std::size_t o = 0; o < l.outer; ++o) {
        for (std::size_t r = 0; r < l.stride; ++r) {
            const std::size_t base = o * dim * l.stride + r;
            bool any = false;
            for (std::size_t x = 0; x < dim; ++x) {
                src[x] = in[base + x * l.stride];
                any = any || src[x] != cplx{};
            }
            // Local maps are linear, so an all-zero line contributes nothing.
            if (!any) continue;
            map(src, dst);
            for (std::size_t x = 0; x < dim; ++x) out[base + x * l.stride] += scale * dst[x];
        }
    }
}

}  // namespace serial

namespace parallel {

cplx permanent_ryser(std::span<const cplx> a, std::size_t m) {
    check_square(a, m);
    if (m == 0) return {1.0, 0.0};
    const std::uint64_t steps = (std::uint64_t{1} << m) - 1;
    if (m < 8) return serial::permanent_ryser(a, m);

    std::vector<cplx> partial(kReductionChunks, cplx{});
#pragma omp parallel for schedule(static)
    for (std::size_t c = 0; c < kReductionChunks; ++c) {
        const std::uint64_t lo = 1 + c * steps / kReductionChunks;
        const std::uint64_t hi = 1 + (c + 1) * steps / kReductionChunks;
        if (lo < hi) partial[c] = ryser_range(a, m, lo, hi);
    }
    const cplx s = pairwise_sum(std::span<const cplx>(partial));
    return (m % 2 == 0) ? s : -s;
}

void accumulate_along_axis(std::span<const cplx> in, std::span<cplx> out, std::size_t dim,
                           std::size_t factors, std::size_t axis, const LocalMap& map,
                           cplx scale) {
    check_axis_shapes(in, out, dim, factors, axis);
    const AxisLayout l = axis_layout(dim, factors, axis);
    const std::size_t lines = l.outer * l.stride;
#pragma omp parallel
    {
        std::vector<cplx> src(dim), dst(dim);
#pragma omp for schedule(static)
        for (std::size_t t = 0; t < lines; ++t) {
            const std::size_t o = t / l.stride;
            const std::size_t r = t % l.stride;
            const std::size_t base = o * dim * l.stride + r;
            bool any = false;
            for (std::size_t x = 0; x < dim; ++x) {
                src[x] = in[base + x * l.stride];
                any = any || src[x] != cplx{};
            }
            if (!any) continue;
            map(src, dst);
            for (std::size_t x = 0; x < dim; ++x) out[base + x * l.stride] += scale * dst[x];
        }
    }
}

}  // namespace parallel

int kernel_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace rcr
