#include <doctest.h>

#include <cstring>
#include <random>
#include <stdexcept>

#include "thermolase/harness.hpp"
#include "thermolase/simd/kernels.hpp"
#include "thermolase/thermal.hpp"

using namespace thermolase;

namespace {

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

// Restores the process-wide backend on scope exit.
struct BackendGuard {
    simd::Backend saved = simd::active_backend();
    ~BackendGuard() { simd::set_backend(saved); }
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("scalar backend is always available") {
    const auto backends = simd::available_backends();
    REQUIRE(!backends.empty());
    CHECK(backends.front() == simd::Backend::scalar);
    for (simd::Backend b : backends) MESSAGE("backend available: " << simd::backend_name(b));
}

TEST_CASE("backends agree bitwise on random fields") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-50.0, 150.0);
    // odd and tiny sizes exercise the vector tails
    const std::size_t shapes[][2] = {{8, 8}, {9, 11}, {13, 8}, {31, 37}, {101, 101}, {17, 64}};
    for (const auto& shape : shapes) {
        thermal::GridSpec g;
        g.nr = shape[0];
        g.nz = shape[1];
        g.dr = 37e-6;
        g.dz = 53e-6;
        const simd::Stencil s = thermal::make_stencil(g);
        std::vector<double> field(g.size());
        std::vector<double> source(g.size());
        for (double& v : field) v = u(rng);
        for (double& v : source) v = 1e8 * u(rng);
        const simd::EulerParams p{0.013e-6 / (37e-6 * 37e-6), 1e-3 / 4.2e6, 0.017, 20.0};

        std::vector<double> lap_ref(g.size());
        std::vector<double> step_ref(g.size());
        std::vector<double> nosrc_ref(g.size());
        simd::laplacian(simd::Backend::scalar, s, field, lap_ref);
        simd::euler_step(simd::Backend::scalar, s, p, field, source, step_ref);
        simd::euler_step(simd::Backend::scalar, s, p, field, {}, nosrc_ref);

        for (simd::Backend b : simd::available_backends()) {
            CAPTURE(simd::backend_name(b));
            CAPTURE(g.nr);
            CAPTURE(g.nz);
            std::vector<double> lap(g.size());
            std::vector<double> step(g.size());
            std::vector<double> nosrc(g.size());
            simd::laplacian(b, s, field, lap);
            simd::euler_step(b, s, p, field, source, step);
            simd::euler_step(b, s, p, field, {}, nosrc);
            CHECK(bitwise_equal(lap, lap_ref));
            CHECK(bitwise_equal(step, step_ref));
            CHECK(bitwise_equal(nosrc, nosrc_ref));
        }
    }
}

TEST_CASE("closed-loop trial is identical across backends") {
    BackendGuard guard;
    harness::ExperimentConfig c;
    c.profile.hold_duration = 2.0;
    c.profile.target = 30.0;
    simd::set_backend(simd::Backend::scalar);
    const harness::TrialResult ref = harness::run_trial(c);
    for (simd::Backend b : simd::available_backends()) {
        simd::set_backend(b);
        const harness::TrialResult r = harness::run_trial(c);
        CHECK(r.kernel_backend == simd::backend_name(b));
        REQUIRE(r.samples.size() == ref.samples.size());
        bool same = true;
        for (std::size_t k = 0; k < r.samples.size(); ++k) {
            same = same && r.samples[k].peak == ref.samples[k].peak && r.samples[k].applied == ref.samples[k].applied;
        }
        CHECK(same);
        CHECK(r.rmse == ref.rmse);
    }
}

TEST_CASE("size mismatches are rejected") {
    thermal::GridSpec g;
    g.nr = 8;
    g.nz = 8;
    const simd::Stencil s = thermal::make_stencil(g);
    std::vector<double> field(63);
    std::vector<double> out(64);
    CHECK_THROWS_AS(simd::laplacian(simd::Backend::scalar, s, field, out), std::invalid_argument);
}

TEST_CASE("unavailable backend cannot be selected") {
    BackendGuard guard;
    const auto backends = simd::available_backends();
    for (simd::Backend b : {simd::Backend::avx2, simd::Backend::neon}) {
        if (std::find(backends.begin(), backends.end(), b) == backends.end()) {
            CHECK_THROWS_AS(simd::set_backend(b), std::invalid_argument);
        }
    }
}

}
