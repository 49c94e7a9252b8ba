#include "stencil_node.hpp"

namespace thermolase::simd::detail {

void laplacian_scalar(const Stencil& s, const double* field, double* out) {
    for (std::size_t i = 0; i < s.nr; ++i) {
        for (std::size_t j = 0; j < s.nz; ++j) {
            out[i * s.nz + j] = node_laplacian(s, field, i, j);
        }
    }
}

void euler_step_scalar(const Stencil& s, const EulerParams& p, const double* field,
                       const double* source, double* out) {
    for (std::size_t i = 0; i < s.nr; ++i) {
        for (std::size_t j = 0; j < s.nz; ++j) {
            out[i * s.nz + j] = node_euler(s, p, field, source, i, j);
        }
    }
}

}  // namespace thermolase::simd::detail
