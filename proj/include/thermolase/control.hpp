#pragma once

// Adaptive peak-intensity law
//
//   I_peak = a_T * T_peak + a_f * f(T_surf) + a_r * r(t)
//
// with the three coefficients adapted online by a gradient (MIT-rule) update on
// the tracking error e = r - T_peak, and frozen while the actuator is pinned
// against a limit in the direction the update would push.
//
// Controller units: temperatures in degC, f in K/mm^2, intensities in W/cm^2.

#include <array>
#include <cstddef>

#include "thermolase/optics.hpp"
#include "thermolase/thermal.hpp"

namespace thermolase::control {

using Vec3 = std::array<double, 3>;

// Regressor / coefficient slots.
inline constexpr std::size_t kPeak = 0;
inline constexpr std::size_t kConduction = 1;
inline constexpr std::size_t kReference = 2;

struct ControllerState {
    Vec3 coefficients{0.152, -0.288, 1.0};
    Vec3 gains{1e-3, 1e-3, 1e-3};  // 1/(unit^2 s); zero freezes a coefficient
    Vec3 lower{-10.0, -10.0, -10.0};
    Vec3 upper{10.0, 10.0, 10.0};

    // Throws DomainError on negative gains, inverted bounds or coefficients
    // outside their bounds.
    void validate() const;
};

struct ReferenceProfile {
    double start = 20.0;          // degC
    double target = 50.0;         // degC
    double ramp_rate = 2.0;       // K/s
    double hold_duration = 70.0;  // s

    void validate() const;
    double ramp_duration() const { return (target - start) / ramp_rate; }
    double total_duration() const { return ramp_duration() + hold_duration; }
};

// Linear ramp from start to target, then constant.
double reference_value(const ReferenceProfile& profile, double t);

// 4 * (T(pitch) - T(0)) / pitch^2 in K/mm^2: the axisymmetric surface
// Laplacian at the beam axis from the two innermost camera samples.
double conduction_estimate(const thermal::SurfaceFrame& frame);

struct Regressors {
    double peak = 0.0;
    double conduction = 0.0;
    double reference = 0.0;

    Vec3 as_array() const { return {peak, conduction, reference}; }
};

// Raw (unsaturated) commanded peak intensity, W/cm^2.
double control_law(const ControllerState& state, const Regressors& phi);
inline double control_law(const ControllerState& state, double t_peak, double f_value, double r) {
    return control_law(state, Regressors{t_peak, f_value, r});
}

enum class Saturation { none, lower, upper };

// One gradient step a_i += gamma_i * e * phi_i * dt, clamped to bounds.
// While saturated, an update that would push the command further past the
// active limit is dropped.
ControllerState adapt(const ControllerState& state, double error, const Regressors& phi, double dt,
                      Saturation saturation = Saturation::none);

struct SaturatedCommand {
    double intensity = 0.0;  // W/m^2
    Saturation side = Saturation::none;

    bool saturated() const { return side != Saturation::none; }
};

// Admissible peak-intensity band for focal distances in [0, max_focal_distance].
struct IntensityRange {
    double min = 0.0;  // W/m^2, at max_focal_distance
    double max = 0.0;  // W/m^2, at focus
};

IntensityRange intensity_range(const optics::BeamSpec& beam, double max_focal_distance);

// Clamps an SI intensity command into intensity_range(beam, max_focal_distance).
SaturatedCommand saturate(double command, const optics::BeamSpec& beam, double max_focal_distance);

}  // namespace thermolase::control
