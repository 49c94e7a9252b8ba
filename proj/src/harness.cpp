#include "thermolase/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "thermolase/error.hpp"

namespace thermolase::harness {

void ExperimentConfig::validate() const {
    beam.validate();
    tissue.validate();
    grid.validate();
    profile.validate();
    controller.validate();
    if (!(control_period > 0.0)) throw DomainError("control period must be > 0");
    if (!(actuator_rate_limit > 0.0)) throw DomainError("actuator rate limit must be > 0");
    if (!(max_focal_distance > 0.0)) throw DomainError("maximum focal distance must be > 0");
    if (!(sensor.pixel_pitch >= grid.dr)) throw DomainError("sensor pixel pitch must be >= grid dr");
    if (!(sensor.noise_sigma >= 0.0)) throw DomainError("sensor noise sigma must be >= 0");
    if (trial_count < 1) throw DomainError("trial count must be >= 1");
    if (grid.radial_extent() < 2.0 * sensor.pixel_pitch) throw DomainError("grid too narrow for three camera samples");
    const double spot = beam.waist;
    if (grid.radial_extent() < 10.0 * spot || grid.depth_extent() < 10.0 * spot) {
        throw DomainError("grid extents must be at least 10x the beam waist");
    }
}

double slew_limit(double command, double previous, double rate, double dt, double max_focal_distance) {
    if (!(rate > 0.0) || !(dt > 0.0)) throw DomainError("slew rate and step must be > 0");
    const double max_move = rate * dt;
    const double moved = previous + std::clamp(command - previous, -max_move, max_move);
    return std::clamp(moved, 0.0, max_focal_distance);
}

double rmse(const std::vector<double>& errors) {
    if (errors.empty()) throw DomainError("rmse of an empty series");
    double sum = 0.0;
    for (double e : errors) sum += e * e;
    return std::sqrt(sum / static_cast<double>(errors.size()));
}

std::size_t tick_count(double duration, double period) {
    return static_cast<std::size_t>(std::floor(duration / period + 1e-9)) + 1;
}

std::vector<double> tracking_errors(const TrialResult& result, double from, double to) {
    std::vector<double> out;
    for (const Sample& s : result.samples) {
        if (s.t >= from && s.t <= to) out.push_back(s.reference - s.peak);
    }
    return out;
}

double mean_error(const TrialResult& result, double from, double to) {
    const std::vector<double> e = tracking_errors(result, from, to);
    if (e.empty()) throw DomainError("no samples in the requested window");
    double sum = 0.0;
    for (double v : e) sum -= v;
    return sum / static_cast<double>(e.size());
}

PhaseStats phase_stats(const TrialResult& result, double ramp_duration) {
    std::vector<double> ramp;
    std::vector<double> hold;
    for (const Sample& s : result.samples) {
        (s.t <= ramp_duration ? ramp : hold).push_back(s.reference - s.peak);
    }
    PhaseStats stats;
    if (!ramp.empty()) stats.ramp_rmse = rmse(ramp);
    if (!hold.empty()) {
        stats.hold_rmse = rmse(hold);
        double sum = 0.0;
        for (double e : hold) sum -= e;
        stats.hold_mean_error = sum / static_cast<double>(hold.size());
    }
    return stats;
}

TrialResult run_trial(const ExperimentConfig& config, const FieldObserver& observer) {
    config.validate();
    using namespace control;

    const double period = config.control_period;
    const std::size_t ticks = tick_count(config.profile.total_duration(), period);
    const IntensityRange range = intensity_range(config.beam, config.max_focal_distance);

    thermal::HeatSolver solver(config.grid, config.tissue, config.boundary);
    thermal::TemperatureField field = thermal::TemperatureField::uniform(config.grid);
    std::mt19937_64 rng(config.seed);
    ControllerState state = config.controller;
    double focal_distance = config.max_focal_distance;

    TrialResult result;
    result.name = config.name;
    result.seed = config.seed;
    result.kernel_backend = std::string(simd::backend_name(simd::active_backend()));
    result.samples.reserve(ticks);

    for (std::size_t k = 0; k < ticks; ++k) {
        const double t = static_cast<double>(k) * period;
        if (observer) observer(t, field);
        const thermal::SurfaceFrame frame =
            thermal::surface_readout(field, config.sensor.pixel_pitch, config.sensor.noise_sigma, rng, t);
        const Regressors phi{frame.peak, conduction_estimate(frame), reference_value(config.profile, t)};

        const double command = control_law(state, phi);
        const SaturatedCommand limited = saturate(command * optics::kWattsPerCm2ToSI, config.beam,
                                                  config.max_focal_distance);
        state = adapt(state, phi.reference - phi.peak, phi, period, limited.side);

        const double target_distance = optics::focal_distance_for_intensity(
            config.beam, std::clamp(limited.intensity, range.min, range.max));
        const double next_distance = slew_limit(target_distance, focal_distance, config.actuator_rate_limit,
                                                period, config.max_focal_distance);
        const bool slewed = std::abs(next_distance - target_distance) > 0.0;
        focal_distance = next_distance;
        const double applied = optics::peak_intensity_at(config.beam, focal_distance);

        result.samples.push_back({t, phi.reference, phi.peak, phi.conduction, command,
                                  applied / optics::kWattsPerCm2ToSI, focal_distance, limited.side, slewed});

        if (k + 1 < ticks) {
            const std::vector<double> source =
                thermal::deposit_source(config.beam, applied, focal_distance, config.tissue, config.grid);
            solver.advance(field, source, period);
        }
    }

    std::vector<double> errors;
    errors.reserve(result.samples.size());
    for (const Sample& s : result.samples) errors.push_back(s.reference - s.peak);
    result.rmse = rmse(errors);
    result.phases = phase_stats(result, config.profile.ramp_duration());
    result.final_coefficients = state.coefficients;
    return result;
}

ConditionStats aggregate(const std::string& name, const std::vector<double>& rmses) {
    if (rmses.empty()) throw DomainError("cannot aggregate an empty condition");
    ConditionStats stats;
    stats.name = name;
    stats.trials = rmses.size();
    double sum = 0.0;
    for (double v : rmses) sum += v;
    stats.mean_rmse = sum / static_cast<double>(rmses.size());
    double var = 0.0;
    for (double v : rmses) var += (v - stats.mean_rmse) * (v - stats.mean_rmse);
    stats.std_rmse = std::sqrt(var / static_cast<double>(rmses.size()));
    return stats;
}

SweepResult run_sweep(const std::vector<ExperimentConfig>& configs, unsigned max_threads) {
    if (configs.empty()) throw DomainError("sweep needs at least one configuration");

    std::vector<ExperimentConfig> jobs;
    for (const ExperimentConfig& c : configs) {
        c.validate();
        for (std::size_t rep = 0; rep < c.trial_count; ++rep) {
            ExperimentConfig job = c;
            job.seed = c.seed + rep;
            job.trial_count = 1;
            jobs.push_back(std::move(job));
        }
    }

    SweepResult out;
    out.trials.resize(jobs.size());
    unsigned workers = max_threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : max_threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, jobs.size()));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            try {
                out.trials[k] = run_trial(jobs[k]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::size_t offset = 0;
    for (const ExperimentConfig& c : configs) {
        std::vector<double> rmses;
        for (std::size_t rep = 0; rep < c.trial_count; ++rep) rmses.push_back(out.trials[offset + rep].rmse);
        out.conditions.push_back(aggregate(c.name, rmses));
        offset += c.trial_count;
    }
    return out;
}

}  // namespace thermolase::harness
