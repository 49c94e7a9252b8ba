// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "../support.hpp"
#include "thermolase/cli.hpp"
#include "thermolase/config.hpp"
#include "thermolase/control.hpp"
#include "thermolase/harness.hpp"
#include "thermolase/optics.hpp"
#include "thermolase/thermal.hpp"

using namespace thermolase;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("[%s] %d. %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

harness::ExperimentConfig preset_config(const std::string& name) {
    harness::ExperimentConfig c = config::default_config();
    c.name = name;
    c.tissue = config::preset(name);
    return c;
}

// 1. closed form vs. bisection and roundtrip on random beams
void optics_roundtrip() {
    Stopwatch clock;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_oracle = 0.0;
    double worst_roundtrip = 0.0;
    for (int n = 0; n < 1000; ++n) {
        const optics::BeamSpec beam{0.5e-6 + 15e-6 * u(rng), 5e-6 + 2e-3 * u(rng), 1e-3 + 50.0 * u(rng)};
        const double i_max = optics::max_intensity(beam);
        const double target = i_max * std::max(1e-6, u(rng));
        const double closed = optics::focal_distance_for_intensity(beam, target);

        double lo = 0.0;
        double hi = optics::rayleigh_range(beam);
        while (optics::peak_intensity_at(beam, hi) > target) hi *= 2.0;
        for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (optics::peak_intensity_at(beam, mid) > target ? lo : hi) = mid;
        }
        const double oracle = 0.5 * (lo + hi);
        const double scale = std::max(closed, optics::rayleigh_range(beam) * 1e-6);
        worst_oracle = std::max(worst_oracle, std::abs(closed - oracle) / scale);
        worst_roundtrip =
            std::max(worst_roundtrip, std::abs(optics::peak_intensity_at(beam, closed) - target) / target);
    }
    const double t = clock.seconds();
    report(1, "optics roundtrip", worst_oracle <= 1e-9 && worst_roundtrip <= 1e-9 && t < 1.0,
           fmt::format("max |closed-bisection|/d_f = {:.3e}, max roundtrip rel = {:.3e} (tol 1e-9), {:.3f} s (< 1 s)",
                       worst_oracle, worst_roundtrip, t));
}

// 2. Gaussian bump diffusing from the adiabatic surface, insulated far faces
double diffusion_error(double spacing) {
    const thermal::TissueProperties props{4.2e6, 0.6, 100.0};
    const double extent = 3.0e-3;
    thermal::GridSpec g;
    g.dr = g.dz = spacing;
    g.nr = g.nz = static_cast<std::size_t>(std::lround(extent / spacing)) + 1;
    g.ambient = 20.0;

    const double s0 = 0.3e-3;
    const double amplitude = 10.0;
    const double t_end = 0.5;
    const double alpha = props.diffusivity();
    auto exact = [&](double r, double z, double t) {
        const double s2 = s0 * s0 + 2.0 * alpha * t;
        return g.ambient + amplitude * std::pow(s0 * s0 / s2, 1.5) * std::exp(-(r * r + z * z) / (2.0 * s2));
    };

    thermal::TemperatureField field(g, 0.0);
    for (std::size_t i = 0; i < g.nr; ++i) {
        for (std::size_t j = 0; j < g.nz; ++j) field.at(i, j) = exact(i * g.dr, j * g.dz, 0.0);
    }
    thermal::HeatSolver solver(g, props, {thermal::FarBoundary::insulated, 0.0});
    solver.advance(field, {}, t_end);

    double err = 0.0;
    for (std::size_t i = 0; i < g.nr; ++i) {
        for (std::size_t j = 0; j < g.nz; ++j) {
            err = std::max(err, std::abs(field.at(i, j) - exact(i * g.dr, j * g.dz, t_end)));
        }
    }
    return err;
}

void thermal_convergence() {
    Stopwatch clock;
    const double e1 = diffusion_error(100e-6);
    const double e2 = diffusion_error(50e-6);
    const double e3 = diffusion_error(25e-6);
    const double r1 = e1 / e2;
    const double r2 = e2 / e3;
    const double t = clock.seconds();
    const bool pass = r1 >= 3.3 && r2 >= 3.3 && t < 30.0;
    report(2, "thermal convergence", pass,
           fmt::format("Linf err {:.3e} / {:.3e} / {:.3e} K at dr=100/50/25 um; ratios {:.2f}, {:.2f} "
                       "(orders {:.2f}, {:.2f}; need ratio >= 3.3), {:.2f} s (< 30 s)",
                       e1, e2, e3, r1, r2, std::log2(r1), std::log2(r2), t));
}

// 3. insulated, sourceless: energy drift and max principle over 10,000 substeps
void conservation() {
    thermal::GridSpec g;  // default 101 x 101
    const thermal::TissueProperties props = config::preset("gelatin");
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(20.0, 60.0);
    thermal::TemperatureField field(g, 0.0);
    for (double& v : field.values()) v = u(rng);
    const auto [lo_it, hi_it] = std::minmax_element(field.values().begin(), field.values().end());
    const double t_min = *lo_it;
    const double t_max = *hi_it;
    const double e0 = thermal::thermal_energy(field, props);

    thermal::HeatSolver solver(g, props, {thermal::FarBoundary::insulated, 0.0});
    const double h = thermal::max_stable_substep(props, g);
    std::size_t substeps = 0;
    double worst_excursion = 0.0;
    for (int k = 0; k < 10000; ++k) {
        solver.advance(field, {}, h);
        substeps += solver.last_substeps();
        const auto [lo, hi] = std::minmax_element(field.values().begin(), field.values().end());
        worst_excursion = std::max({worst_excursion, t_min - *lo, *hi - t_max});
    }
    const double drift = std::abs(thermal::thermal_energy(field, props) - e0) / e0;
    report(3, "conservation", substeps == 10000 && drift < 1e-3 && worst_excursion <= 1e-9,
           fmt::format("{} substeps, energy drift {:.3e} (< 1e-3), max principle excursion {:.3e} K (<= 1e-9)",
                       substeps, drift, std::max(0.0, worst_excursion)));
}

const char* kPresets[] = {"gelatin", "liver", "bone", "muscle"};

struct Deferred {
    bool pass = false;
    std::string detail;
};

// 4 and 7 share the preset runs; 7 is reported in order later.
Deferred tracking_and_adaptation() {
    bool all_track = true;
    bool all_better = true;
    double slowest = 0.0;
    std::string tracking;
    std::string adaptation;
    for (const char* name : kPresets) {
        const harness::ExperimentConfig c = preset_config(name);
        Stopwatch clock;
        const harness::TrialResult adaptive = harness::run_trial(c);
        slowest = std::max(slowest, clock.seconds());
        harness::ExperimentConfig frozen = c;
        frozen.controller.gains = {0.0, 0.0, 0.0};
        const harness::TrialResult fixed = harness::run_trial(frozen);

        all_track = all_track && adaptive.rmse <= 2.5;
        all_better = all_better && adaptive.rmse < fixed.rmse;
        tracking += fmt::format("{}{} {:.3f}", tracking.empty() ? "" : ", ", name, adaptive.rmse);
        adaptation += fmt::format("{}{} {:.3f} < {:.3f}", adaptation.empty() ? "" : ", ", name, adaptive.rmse,
                                  fixed.rmse);
    }
    report(4, "closed-loop tracking", all_track && slowest < 60.0,
           fmt::format("RMSE K: {} (<= 2.5); slowest trial {:.2f} s (< 60 s)", tracking, slowest));
    return {all_better, fmt::format("adaptive vs frozen RMSE K: {}", adaptation)};
}

void hold_accuracy() {
    harness::ExperimentConfig c = preset_config("gelatin");
    c.sensor.noise_sigma = 0.0;
    const harness::TrialResult r = harness::run_trial(c);
    const double end = c.profile.total_duration();
    const double mean = harness::mean_error(r, end - 30.0, end);
    report(5, "hold accuracy", std::abs(mean) <= 0.5,
           fmt::format("noise-free gelatin, final 30 s mean(T_peak - 50) = {:+.4f} K (|.| <= 0.5)", mean));
}

void robustness() {
    const thermal::TissueProperties base = config::preset("gelatin");
    bool pass = true;
    std::string detail;
    const char* labels[] = {"c_v", "kappa", "mu_a"};
    for (int p = 0; p < 3; ++p) {
        for (double factor : {0.5, 1.5}) {
            harness::ExperimentConfig c = preset_config("gelatin");
            c.tissue = base;
            double& field = p == 0 ? c.tissue.volumetric_heat_capacity
                            : p == 1 ? c.tissue.thermal_conductivity
                                     : c.tissue.absorption_coefficient;
            field *= factor;
            const double e = harness::run_trial(c).rmse;
            pass = pass && e <= 3.5;
            detail += fmt::format("{}{} x{} {:.3f}", detail.empty() ? "" : ", ", labels[p], factor, e);
        }
    }
    report(6, "robustness", pass, fmt::format("gelatin RMSE K: {} (<= 3.5)", detail));
}

// 8. Scalar plant dT/dt = (kappa/c_v) f + (mu_a/c_v) I with f = -g (T - T_amb) and
// mu_a = c_v, driven by the adaptive law with matched ideal coefficients.
void lyapunov_surrogate() {
    const double conduction_rate = 0.5;  // kappa_eff / c_v
    const double g = 0.3;                // f = -g (T - ambient)
    const double ambient = 20.0;
    const double lambda = 2.0;           // target closed-loop pole
    const double r = 50.0;
    const double dt = 1e-5;
    const double duration = 20.0;

    const control::Vec3 ideal{-lambda, -conduction_rate, lambda};
    control::ControllerState state;
    state.gains = {2e-4, 1e-3, 2e-4};
    state.lower = {-1e3, -1e3, -1e3};
    state.upper = {1e3, 1e3, 1e3};

    auto lyapunov = [&](double temperature, const control::ControllerState& s) {
        const double e = r - temperature;
        double v = 0.5 * e * e;
        for (std::size_t k = 0; k < 3; ++k) {
            const double d = s.coefficients[k] - ideal[k];
            v += d * d / (2.0 * s.gains[k]);
        }
        return v;
    };

    double temperature = ambient;
    double v = lyapunov(temperature, state);
    const double v0 = v;
    double worst_increase = -1e300;
    const auto steps = static_cast<std::size_t>(std::lround(duration / dt));
    for (std::size_t k = 0; k < steps; ++k) {
        const double f = -g * (temperature - ambient);
        const control::Regressors phi{temperature, f, r};
        const double intensity = control::control_law(state, phi);
        const double next_temperature = temperature + dt * (conduction_rate * f + intensity);
        state = control::adapt(state, r - temperature, phi, dt);
        temperature = next_temperature;
        const double next_v = lyapunov(temperature, state);
        worst_increase = std::max(worst_increase, next_v - v);
        v = next_v;
    }
    report(8, "Lyapunov surrogate", worst_increase <= 1e-6,
           fmt::format("{} Euler steps, max V(k+1)-V(k) = {:.3e} (<= 1e-6), V {:.3f} -> {:.3f}, final |e| = {:.2e}",
                       steps, worst_increase, v0, v, std::abs(r - temperature)));
}

void determinism() {
    testing::ScratchDir dir("acceptance");
    std::ostringstream log;
    const std::string ini = config::write_ini(preset_config("gelatin"));
    testing::write_file(dir / "gelatin.ini", ini);
    const cli::SimulateOptions first{(dir / "gelatin.ini").string(), (dir / "a").string(), std::nullopt, 0.0};
    cli::SimulateOptions second = first;
    second.output_dir = (dir / "b").string();
    const bool ran = cli::cmd_simulate(first, log) == cli::kExitOk && cli::cmd_simulate(second, log) == cli::kExitOk;
    const std::string sa = testing::read_file(dir / "a" / "series.csv");
    const std::string sb = testing::read_file(dir / "b" / "series.csv");
    const bool identical = ran && !sa.empty() && sa == sb;

    // short protocol keeps the sweep quick; four presets x three repetitions
    std::string sweep_ini = ini;
    sweep_ini += "\n[sweep]\nconditions = gelatin, liver, bone, muscle\nrepetitions = 3\n";
    const auto hold = sweep_ini.find("hold_s = ");
    sweep_ini.replace(hold, sweep_ini.find('\n', hold) - hold, "hold_s = 10");
    testing::write_file(dir / "sweep.ini", sweep_ini);
    const bool swept = cli::cmd_sweep({(dir / "sweep.ini").string(), (dir / "sweep").string(), 0}, log) == cli::kExitOk;

    bool recomputed = swept;
    std::size_t rows = 0;
    if (swept) {
        std::istringstream aggregate(testing::read_file(dir / "sweep" / "aggregate.csv"));
        std::string line;
        std::getline(aggregate, line);
        while (std::getline(aggregate, line)) {
            ++rows;
            std::istringstream cells(line);
            std::string name, mean_text, std_text;
            std::getline(cells, name, ',');
            std::getline(cells, mean_text, ',');
            std::getline(cells, std_text, ',');
            std::vector<double> rmses;
            for (int rep = 0; rep < 3; ++rep) {
                const auto path = dir / "sweep" / name / fmt::format("rep_{:02d}", rep) / "summary.json";
                rmses.push_back(nlohmann::json::parse(testing::read_file(path))["rmse"].get<double>());
            }
            double mean = 0.0;
            for (double e : rmses) mean += e;
            mean /= static_cast<double>(rmses.size());
            double var = 0.0;
            for (double e : rmses) var += (e - mean) * (e - mean);
            const double sd = std::sqrt(var / static_cast<double>(rmses.size()));
            recomputed = recomputed && std::stod(mean_text) == mean && std::stod(std_text) == sd;
        }
    }
    recomputed = recomputed && rows == 4;
    report(9, "determinism", identical && recomputed,
           fmt::format("series.csv byte-identical across runs: {} ({} bytes); aggregate recomputed exactly from "
                       "{} per-trial summaries: {}",
                       identical ? "yes" : "no", sa.size(), rows * 3, recomputed ? "yes" : "no"));
}

}  // namespace

int main() {
    std::printf("kernel backend: %s\n", std::string(simd::backend_name(simd::active_backend())).c_str());
    optics_roundtrip();
    thermal_convergence();
    conservation();
    const Deferred adaptation = tracking_and_adaptation();
    hold_accuracy();
    robustness();
    report(7, "adaptation utility", adaptation.pass, adaptation.detail);
    lyapunov_surrogate();
    determinism();
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
