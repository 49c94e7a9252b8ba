#include "thermolase/optics.hpp"

#include <cmath>
#include <string>

#include "thermolase/error.hpp"

namespace thermolase::optics {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void BeamSpec::validate() const {
    if (!positive_finite(wavelength)) throw DomainError("beam wavelength must be > 0");
    if (!positive_finite(waist)) throw DomainError("beam waist must be > 0");
    if (!positive_finite(power)) throw DomainError("beam power must be > 0");
}

double rayleigh_range(const BeamSpec& beam) {
    return kPi * beam.waist * beam.waist / beam.wavelength;
}

double spot_radius_at(const BeamSpec& beam, double z) {
    if (!(z >= 0.0)) throw DomainError("axial distance must be >= 0, got " + std::to_string(z));
    const double u = z / rayleigh_range(beam);
    return beam.waist * std::sqrt(1.0 + u * u);
}

double max_intensity(const BeamSpec& beam) {
    return 2.0 * beam.power / (kPi * beam.waist * beam.waist);
}

double peak_intensity_at(const BeamSpec& beam, double focal_distance) {
    if (!(focal_distance >= 0.0)) {
        throw DomainError("focal distance must be >= 0, got " + std::to_string(focal_distance));
    }
    // I_max / (1 + u^2) rather than 2P / (pi w(z)^2): same value, and it is the
    // exact algebraic inverse of focal_distance_for_intensity.
    const double u = focal_distance / rayleigh_range(beam);
    return max_intensity(beam) / (1.0 + u * u);
}

double focal_distance_for_intensity(const BeamSpec& beam, double target) {
    if (!(target > 0.0)) throw DomainError("target intensity must be > 0");
    const double i_max = max_intensity(beam);
    if (target > i_max) {
        throw UnreachableIntensity("target intensity " + std::to_string(target) +
                                   " W/m^2 exceeds focused maximum " + std::to_string(i_max));
    }
    const double radicand = i_max / target - 1.0;
    return rayleigh_range(beam) * std::sqrt(radicand > 0.0 ? radicand : 0.0);
}

double equivalent_waist_from_na(double wavelength, double numerical_aperture) {
    if (!positive_finite(wavelength)) throw DomainError("wavelength must be > 0");
    if (!(numerical_aperture > 0.0 && numerical_aperture < 1.0)) {
        throw DomainError("numerical aperture must lie in (0, 1)");
    }
    const double divergence = std::asin(numerical_aperture);
    return wavelength / (kPi * divergence);
}

}  // namespace thermolase::optics
