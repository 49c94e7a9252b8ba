#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "thermolase/simd/kernels.hpp"

namespace thermolase::simd {

namespace {

bool cpu_supports(Backend backend) {
    switch (backend) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(THERMOLASE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::neon:
#if defined(THERMOLASE_HAVE_NEON)
            return true;  // mandatory on AArch64
#else
            return false;
#endif
    }
    return false;
}

Backend best_backend() {
    if (const char* forced = std::getenv("THERMOLASE_KERNEL")) {
        const std::string name(forced);
        for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
            if (name == backend_name(b) && cpu_supports(b)) return b;
        }
    }
    if (cpu_supports(Backend::avx2)) return Backend::avx2;
    if (cpu_supports(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

std::atomic<int>& selected() {
    static std::atomic<int> value{static_cast<int>(best_backend())};
    return value;
}

void check_sizes(const Stencil& s, std::size_t field, std::size_t out) {
    const std::size_t n = s.nr * s.nz;
    if (s.radial_plus.size() != s.nr || s.radial_minus.size() != s.nr ||
        s.axial_plus.size() != s.nz || s.axial_minus.size() != s.nz) {
        throw std::invalid_argument("stencil weight arrays do not match grid dimensions");
    }
    if (field != n || out != n) throw std::invalid_argument("field size does not match stencil");
}

}  // namespace

std::string_view backend_name(Backend backend) {
    switch (backend) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

std::vector<Backend> available_backends() {
    std::vector<Backend> out;
    for (Backend b : {Backend::scalar, Backend::avx2, Backend::neon}) {
        if (cpu_supports(b)) out.push_back(b);
    }
    return out;
}

Backend active_backend() { return static_cast<Backend>(selected().load(std::memory_order_relaxed)); }

void set_backend(Backend backend) {
    if (!cpu_supports(backend)) {
        throw std::invalid_argument("kernel backend not available: " + std::string(backend_name(backend)));
    }
    selected().store(static_cast<int>(backend), std::memory_order_relaxed);
}

void laplacian(Backend backend, const Stencil& s, std::span<const double> field, std::span<double> out) {
    check_sizes(s, field.size(), out.size());
    switch (backend) {
#if defined(THERMOLASE_HAVE_AVX2)
        case Backend::avx2:
            detail::laplacian_avx2(s, field.data(), out.data());
            return;
#endif
#if defined(THERMOLASE_HAVE_NEON)
        case Backend::neon:
            detail::laplacian_neon(s, field.data(), out.data());
            return;
#endif
        default:
            detail::laplacian_scalar(s, field.data(), out.data());
    }
}

void euler_step(Backend backend, const Stencil& s, const EulerParams& p, std::span<const double> field,
                std::span<const double> source, std::span<double> out) {
    check_sizes(s, field.size(), out.size());
    if (!source.empty() && source.size() != field.size()) {
        throw std::invalid_argument("source size does not match field");
    }
    const double* q = source.empty() ? nullptr : source.data();
    switch (backend) {
#if defined(THERMOLASE_HAVE_AVX2)
        case Backend::avx2:
            detail::euler_step_avx2(s, p, field.data(), q, out.data());
            return;
#endif
#if defined(THERMOLASE_HAVE_NEON)
        case Backend::neon:
            detail::euler_step_neon(s, p, field.data(), q, out.data());
            return;
#endif
        default:
            detail::euler_step_scalar(s, p, field.data(), q, out.data());
    }
}

}  // namespace thermolase::simd
