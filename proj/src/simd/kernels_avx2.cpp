// Compiled with -mavx2 only. FMA stays disabled so results match the scalar path bit for bit.

#include <immintrin.h>

#include "stencil_node.hpp"

namespace thermolase::simd::detail {

namespace {

constexpr std::size_t kLanes = 4;

struct RowView {
    const double* row;
    const double* north;
    const double* south;
    __m256d rp;
    __m256d rm;
};

RowView row_view(const Stencil& s, const double* field, std::size_t i) {
    const double* row = field + i * s.nz;
    return {row,
            (i + 1 < s.nr) ? row + s.nz : row,
            (i > 0) ? row - s.nz : row,
            _mm256_set1_pd(s.radial_plus[i]),
            _mm256_set1_pd(s.radial_minus[i])};
}

inline __m256d lap4(const Stencil& s, const RowView& v, std::size_t j, __m256d c) {
    const __m256d north = _mm256_loadu_pd(v.north + j);
    const __m256d south = _mm256_loadu_pd(v.south + j);
    const __m256d up = _mm256_loadu_pd(v.row + j + 1);
    const __m256d down = _mm256_loadu_pd(v.row + j - 1);
    const __m256d zp = _mm256_loadu_pd(s.axial_plus.data() + j);
    const __m256d zm = _mm256_loadu_pd(s.axial_minus.data() + j);
    __m256d lap = _mm256_mul_pd(v.rp, _mm256_sub_pd(north, c));
    lap = _mm256_add_pd(lap, _mm256_mul_pd(v.rm, _mm256_sub_pd(south, c)));
    lap = _mm256_add_pd(lap, _mm256_mul_pd(zp, _mm256_sub_pd(up, c)));
    lap = _mm256_add_pd(lap, _mm256_mul_pd(zm, _mm256_sub_pd(down, c)));
    return lap;
}

}  // namespace

void laplacian_avx2(const Stencil& s, const double* field, double* out) {
    const std::size_t nz = s.nz;
    for (std::size_t i = 0; i < s.nr; ++i) {
        const RowView v = row_view(s, field, i);
        double* dst = out + i * nz;
        dst[0] = node_laplacian(s, field, i, 0);
        std::size_t j = 1;
        for (; j + kLanes < nz; j += kLanes) {
            const __m256d c = _mm256_loadu_pd(v.row + j);
            _mm256_storeu_pd(dst + j, lap4(s, v, j, c));
        }
        for (; j < nz; ++j) dst[j] = node_laplacian(s, field, i, j);
    }
}

void euler_step_avx2(const Stencil& s, const EulerParams& p, const double* field,
                     const double* source, double* out) {
    const std::size_t nz = s.nz;
    const __m256d diffusion = _mm256_set1_pd(p.diffusion_scale);
    const __m256d source_scale = _mm256_set1_pd(p.source_scale);
    for (std::size_t i = 0; i < s.nr; ++i) {
        const RowView v = row_view(s, field, i);
        double* dst = out + i * nz;
        const double* q = source ? source + i * nz : nullptr;
        dst[0] = node_euler(s, p, field, source, i, 0);
        std::size_t j = 1;
        for (; j + kLanes < nz; j += kLanes) {
            const __m256d c = _mm256_loadu_pd(v.row + j);
            __m256d t = _mm256_add_pd(c, _mm256_mul_pd(diffusion, lap4(s, v, j, c)));
            if (q) t = _mm256_add_pd(t, _mm256_mul_pd(source_scale, _mm256_loadu_pd(q + j)));
            _mm256_storeu_pd(dst + j, t);
        }
        for (; j < nz; ++j) dst[j] = node_euler(s, p, field, source, i, j);
    }
}

}  // namespace thermolase::simd::detail
