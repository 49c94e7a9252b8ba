#pragma once

// Gaussian beam geometry for focus-regulated heating.
//
// All quantities are SI (m, W, W/m^2). The peak intensity of a beam of
// power P and 1/e^2 radius w is 2P / (pi w^2); focal distance d_f is the
// nonnegative axial offset between the focal plane and the tissue surface.

namespace thermolase::optics {

inline constexpr double kPi = 3.14159265358979323846;

// W/cm^2 <-> W/m^2.
inline constexpr double kWattsPerCm2ToSI = 1.0e4;

struct BeamSpec {
    double wavelength = 10.6e-6;  // m
    double waist = 75e-6;         // m, radius at focus
    double power = 0.5;           // W

    // Throws DomainError unless all fields are strictly positive and finite.
    void validate() const;
};

double rayleigh_range(const BeamSpec& beam);

// w(z) = w0 * sqrt(1 + (z / z_R)^2), z >= 0.
double spot_radius_at(const BeamSpec& beam, double z);

// Peak intensity at the maximum, d_f = 0.
double max_intensity(const BeamSpec& beam);

// 2P / (pi w(d_f)^2).
double peak_intensity_at(const BeamSpec& beam, double focal_distance);

// Closed-form inverse of peak_intensity_at:
//   d_f = z_R * sqrt(I_max / target - 1)
// Throws UnreachableIntensity when target > I_max, DomainError when target <= 0.
double focal_distance_for_intensity(const BeamSpec& beam, double target);

// Waist of the Gaussian beam whose far-field half-angle equals asin(NA),
// used to describe a fiber-delivered beam with the same BeamSpec.
double equivalent_waist_from_na(double wavelength, double numerical_aperture);

}  // namespace thermolase::optics
