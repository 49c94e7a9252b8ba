#pragma once

// Data-parallel inner loops of the axisymmetric heat solver.
//
// Fields are stored row-major with z fastest: value(i_r, i_z) = data[i_r * nz + i_z].
// Every backend evaluates the same expression tree in the same order and never
// contracts multiply-adds, so all backends are bitwise identical to the scalar
// reference. Tests rely on that.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace thermolase::simd {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend backend);

// Finite-volume stencil weights. For node (i, j):
//   lap = rp[i]*(T[i+1,j]-T) + rm[i]*(T[i-1,j]-T) + zp[j]*(T[i,j+1]-T) + zm[j]*(T[i,j-1]-T)
// A missing neighbour must carry a zero weight.
struct Stencil {
    std::size_t nr = 0;
    std::size_t nz = 0;
    std::vector<double> radial_plus;   // nr, units 1/m^2
    std::vector<double> radial_minus;  // nr
    std::vector<double> axial_plus;    // nz
    std::vector<double> axial_minus;   // nz
};

// One explicit Euler substep:
//   out = T + diffusion_scale * lap + source_scale * Q   (Q may be empty: no source)
// On the surface row (j == 0) the term - surface_loss * (T - ambient) is appended.
struct EulerParams {
    double diffusion_scale = 0.0;  // dt * kappa / c_v
    double source_scale = 0.0;     // dt / c_v
    double surface_loss = 0.0;     // dt * h * (2/dz) / c_v
    double ambient = 0.0;
};

// Backends compiled into this binary and supported by the running CPU.
std::vector<Backend> available_backends();

// Best available backend, unless overridden by set_backend() or by the
// THERMOLASE_KERNEL environment variable (scalar|avx2|neon).
Backend active_backend();

// Throws std::invalid_argument if `backend` is not available.
void set_backend(Backend backend);

void laplacian(Backend backend, const Stencil& stencil, std::span<const double> field,
               std::span<double> out);
void euler_step(Backend backend, const Stencil& stencil, const EulerParams& params,
                std::span<const double> field, std::span<const double> source,
                std::span<double> out);

inline void laplacian(const Stencil& s, std::span<const double> field, std::span<double> out) {
    laplacian(active_backend(), s, field, out);
}
inline void euler_step(const Stencil& s, const EulerParams& p, std::span<const double> field,
                       std::span<const double> source, std::span<double> out) {
    euler_step(active_backend(), s, p, field, source, out);
}

namespace detail {

// Per-backend entry points; pointers are unaliased, sizes already checked.
void laplacian_scalar(const Stencil&, const double* field, double* out);
void euler_step_scalar(const Stencil&, const EulerParams&, const double* field,
                       const double* source, double* out);
#if defined(THERMOLASE_HAVE_AVX2)
void laplacian_avx2(const Stencil&, const double* field, double* out);
void euler_step_avx2(const Stencil&, const EulerParams&, const double* field,
                     const double* source, double* out);
#endif
#if defined(THERMOLASE_HAVE_NEON)
void laplacian_neon(const Stencil&, const double* field, double* out);
void euler_step_neon(const Stencil&, const EulerParams&, const double* field,
                     const double* source, double* out);
#endif

}  // namespace detail

}  // namespace thermolase::simd
