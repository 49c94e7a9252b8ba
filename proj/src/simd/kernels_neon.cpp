// AArch64 Advanced SIMD backend, two doubles per lane group. Multiply and add
// stay separate (no vfmaq) to match the scalar reference.

#include <arm_neon.h>

#include "stencil_node.hpp"

namespace thermolase::simd::detail {

namespace {

constexpr std::size_t kLanes = 2;

inline float64x2_t lap2(const Stencil& s, const double* row, const double* north,
                        const double* south, float64x2_t rp, float64x2_t rm, std::size_t j,
                        float64x2_t c) {
    const float64x2_t zp = vld1q_f64(s.axial_plus.data() + j);
    const float64x2_t zm = vld1q_f64(s.axial_minus.data() + j);
    float64x2_t lap = vmulq_f64(rp, vsubq_f64(vld1q_f64(north + j), c));
    lap = vaddq_f64(lap, vmulq_f64(rm, vsubq_f64(vld1q_f64(south + j), c)));
    lap = vaddq_f64(lap, vmulq_f64(zp, vsubq_f64(vld1q_f64(row + j + 1), c)));
    lap = vaddq_f64(lap, vmulq_f64(zm, vsubq_f64(vld1q_f64(row + j - 1), c)));
    return lap;
}

}  // namespace

void laplacian_neon(const Stencil& s, const double* field, double* out) {
    const std::size_t nz = s.nz;
    for (std::size_t i = 0; i < s.nr; ++i) {
        const double* row = field + i * nz;
        const double* north = (i + 1 < s.nr) ? row + nz : row;
        const double* south = (i > 0) ? row - nz : row;
        const float64x2_t rp = vdupq_n_f64(s.radial_plus[i]);
        const float64x2_t rm = vdupq_n_f64(s.radial_minus[i]);
        double* dst = out + i * nz;
        dst[0] = node_laplacian(s, field, i, 0);
        std::size_t j = 1;
        for (; j + kLanes < nz; j += kLanes) {
            const float64x2_t c = vld1q_f64(row + j);
            vst1q_f64(dst + j, lap2(s, row, north, south, rp, rm, j, c));
        }
        for (; j < nz; ++j) dst[j] = node_laplacian(s, field, i, j);
    }
}

void euler_step_neon(const Stencil& s, const EulerParams& p, const double* field,
                     const double* source, double* out) {
    const std::size_t nz = s.nz;
    const float64x2_t diffusion = vdupq_n_f64(p.diffusion_scale);
    const float64x2_t source_scale = vdupq_n_f64(p.source_scale);
    for (std::size_t i = 0; i < s.nr; ++i) {
        const double* row = field + i * nz;
        const double* north = (i + 1 < s.nr) ? row + nz : row;
        const double* south = (i > 0) ? row - nz : row;
        const float64x2_t rp = vdupq_n_f64(s.radial_plus[i]);
        const float64x2_t rm = vdupq_n_f64(s.radial_minus[i]);
        const double* q = source ? source + i * nz : nullptr;
        double* dst = out + i * nz;
        dst[0] = node_euler(s, p, field, source, i, 0);
        std::size_t j = 1;
        for (; j + kLanes < nz; j += kLanes) {
            const float64x2_t c = vld1q_f64(row + j);
            float64x2_t t = vaddq_f64(c, vmulq_f64(diffusion, lap2(s, row, north, south, rp, rm, j, c)));
            if (q) t = vaddq_f64(t, vmulq_f64(source_scale, vld1q_f64(q + j)));
            vst1q_f64(dst + j, t);
        }
        for (; j < nz; ++j) dst[j] = node_euler(s, p, field, source, i, j);
    }
}

}  // namespace thermolase::simd::detail
