#pragma once

// Closed-loop simulation of focus-regulated laser heating:
// camera -> conduction estimate -> adaptive law -> saturation -> focus
// inversion -> slew-limited actuator -> plant, once per control period.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "thermolase/control.hpp"
#include "thermolase/optics.hpp"
#include "thermolase/thermal.hpp"

namespace thermolase::harness {

struct SensorSpec {
    double pixel_pitch = 200e-6;  // m
    double noise_sigma = 0.1;     // K
};

struct ExperimentConfig {
    std::string name = "trial";
    optics::BeamSpec beam;
    thermal::TissueProperties tissue;
    thermal::GridSpec grid;
    thermal::BoundarySpec boundary;
    control::ReferenceProfile profile;
    control::ControllerState controller;
    double control_period = 0.01;         // s
    double actuator_rate_limit = 20e-3;   // m/s
    double max_focal_distance = 130e-3;   // m
    SensorSpec sensor;
    std::uint64_t seed = 1;
    std::size_t trial_count = 1;

    // Throws DomainError naming the first violated constraint.
    void validate() const;
};

struct Sample {
    double t = 0.0;                // s
    double reference = 0.0;        // degC
    double peak = 0.0;             // degC, measured
    double conduction = 0.0;       // K/mm^2
    double command = 0.0;          // W/cm^2, raw law output
    double applied = 0.0;          // W/cm^2, from the actual focal distance
    double focal_distance = 0.0;   // m
    control::Saturation saturation = control::Saturation::none;
    bool slew_limited = false;
};

struct PhaseStats {
    double ramp_rmse = 0.0;
    double hold_rmse = 0.0;
    double hold_mean_error = 0.0;  // mean(T_peak - r) over the hold
};

struct TrialResult {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<Sample> samples;
    double rmse = 0.0;
    PhaseStats phases;
    control::Vec3 final_coefficients{};
    std::string kernel_backend;
};

// Moves `previous` toward `command` by at most rate*dt, then clamps to
// [0, max_focal_distance].
double slew_limit(double command, double previous, double rate, double dt, double max_focal_distance);

// sqrt(mean(e^2)); throws DomainError on an empty series.
double rmse(const std::vector<double>& errors);

// Number of control ticks including t = 0: floor(duration / period) + 1.
std::size_t tick_count(double duration, double period);

// Tracking errors r - T_peak of the samples with t in [from, to].
std::vector<double> tracking_errors(const TrialResult& result, double from, double to);

// mean(T_peak - r) over samples with t in [from, to].
double mean_error(const TrialResult& result, double from, double to);

PhaseStats phase_stats(const TrialResult& result, double ramp_duration);

// Called once per tick with the plant state that the camera frame was read from.
using FieldObserver = std::function<void(double t, const thermal::TemperatureField& field)>;

TrialResult run_trial(const ExperimentConfig& config, const FieldObserver& observer = {});

struct ConditionStats {
    std::string name;
    std::size_t trials = 0;
    double mean_rmse = 0.0;
    double std_rmse = 0.0;  // population standard deviation
};

struct SweepResult {
    std::vector<TrialResult> trials;  // config order, then repetition order
    std::vector<ConditionStats> conditions;
};

// Runs every config trial_count times with seeds seed + repetition index.
// Trials run on up to max_threads workers (0 = hardware concurrency);
// results are independent of the thread count.
SweepResult run_sweep(const std::vector<ExperimentConfig>& configs, unsigned max_threads = 0);

ConditionStats aggregate(const std::string& name, const std::vector<double>& rmses);

}  // namespace thermolase::harness
