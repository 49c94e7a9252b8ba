#pragma once

// Single-node stencil shared by every backend. Vector bodies must reproduce
// exactly this operation order; edges and tails call these directly.

#include <cstddef>

#include "thermolase/simd/kernels.hpp"

namespace thermolase::simd::detail {

inline double node_laplacian(const Stencil& s, const double* field, std::size_t i, std::size_t j) {
    const std::size_t nz = s.nz;
    const double* row = field + i * nz;
    const double c = row[j];
    const double north = (i + 1 < s.nr) ? row[j + nz] : c;
    const double south = (i > 0) ? row[j - nz] : c;
    const double up = (j + 1 < nz) ? row[j + 1] : c;
    const double down = (j > 0) ? row[j - 1] : c;
    double lap = s.radial_plus[i] * (north - c);
    lap = lap + s.radial_minus[i] * (south - c);
    lap = lap + s.axial_plus[j] * (up - c);
    lap = lap + s.axial_minus[j] * (down - c);
    return lap;
}

inline double node_euler(const Stencil& s, const EulerParams& p, const double* field,
                         const double* source, std::size_t i, std::size_t j) {
    const std::size_t k = i * s.nz + j;
    const double c = field[k];
    double v = c + p.diffusion_scale * node_laplacian(s, field, i, j);
    if (source != nullptr) v = v + p.source_scale * source[k];
    if (j == 0) v = v - p.surface_loss * (c - p.ambient);
    return v;
}

}  // namespace thermolase::simd::detail
