#include "thermolase/control.hpp"

#include <algorithm>
#include <cmath>

#include "thermolase/error.hpp"

namespace thermolase::control {

void ControllerState::validate() const {
    for (std::size_t k = 0; k < 3; ++k) {
        if (!(gains[k] >= 0.0) || !std::isfinite(gains[k])) throw DomainError("adaptation gains must be >= 0");
        if (!(lower[k] <= upper[k])) throw DomainError("coefficient bounds are inverted");
        if (!(coefficients[k] >= lower[k] && coefficients[k] <= upper[k])) {
            throw DomainError("initial coefficient outside its bounds");
        }
    }
}

void ReferenceProfile::validate() const {
    if (!(ramp_rate > 0.0) || !std::isfinite(ramp_rate)) throw DomainError("ramp rate must be > 0");
    if (!(target >= start)) throw DomainError("reference target must not be below start");
    if (!(hold_duration >= 0.0) || !std::isfinite(hold_duration)) throw DomainError("hold duration must be >= 0");
}

double reference_value(const ReferenceProfile& profile, double t) {
    if (!(t >= 0.0)) throw DomainError("reference time must be >= 0");
    return std::min(profile.target, profile.start + profile.ramp_rate * t);
}

double conduction_estimate(const thermal::SurfaceFrame& frame) {
    if (frame.radial_samples.size() < 3) throw InsufficientSamples("conduction estimate needs >= 3 radial samples");
    const double pitch_mm = frame.pixel_pitch * 1e3;
    return 4.0 * (frame.radial_samples[1] - frame.radial_samples[0]) / (pitch_mm * pitch_mm);
}

double control_law(const ControllerState& state, const Regressors& phi) {
    const Vec3& a = state.coefficients;
    return a[kPeak] * phi.peak + a[kConduction] * phi.conduction + a[kReference] * phi.reference;
}

ControllerState adapt(const ControllerState& state, double error, const Regressors& phi, double dt,
                      Saturation saturation) {
    if (!(dt > 0.0)) throw DomainError("adaptation step must be > 0");
    const Vec3 regressors = phi.as_array();
    Vec3 delta{};
    double command_change = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        delta[k] = state.gains[k] * error * regressors[k] * dt;
        command_change += delta[k] * regressors[k];
    }
    if ((saturation == Saturation::upper && command_change > 0.0) ||
        (saturation == Saturation::lower && command_change < 0.0)) {
        return state;
    }
    ControllerState next = state;
    for (std::size_t k = 0; k < 3; ++k) {
        next.coefficients[k] = std::clamp(state.coefficients[k] + delta[k], state.lower[k], state.upper[k]);
    }
    return next;
}

IntensityRange intensity_range(const optics::BeamSpec& beam, double max_focal_distance) {
    if (!(max_focal_distance > 0.0)) throw DomainError("maximum focal distance must be > 0");
    return {optics::peak_intensity_at(beam, max_focal_distance), optics::max_intensity(beam)};
}

SaturatedCommand saturate(double command, const optics::BeamSpec& beam, double max_focal_distance) {
    const IntensityRange range = intensity_range(beam, max_focal_distance);
    if (command > range.max) return {range.max, Saturation::upper};
    if (command < range.min) return {range.min, Saturation::lower};
    return {command, Saturation::none};
}

}  // namespace thermolase::control
