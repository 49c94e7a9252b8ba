#pragma once

// Laser heating of tissue on an axisymmetric (r, z) node grid:
//
//   c_v dT/dt = kappa * lap(T) + Q(r, z)
//
// Node (i, j) sits at r = i*dr, z = j*dz; z = 0 is the irradiated surface.
// Each node owns a cylindrical-shell control volume (half cells on the axis,
// surface and outer boundaries), so the stencil is conservative and reduces to
// the usual centered differences in the interior.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "thermolase/optics.hpp"
#include "thermolase/simd/kernels.hpp"

namespace thermolase::thermal {

struct TissueProperties {
    double volumetric_heat_capacity = 4.2e6;  // J/(m^3 K)
    double thermal_conductivity = 0.60;       // W/(m K)
    double absorption_coefficient = 100.0;    // 1/m

    void validate() const;
    double diffusivity() const { return thermal_conductivity / volumetric_heat_capacity; }
};

struct GridSpec {
    double dr = 50e-6;  // m
    double dz = 50e-6;  // m
    std::size_t nr = 101;
    std::size_t nz = 101;
    double ambient = 20.0;  // degC

    void validate() const;
    std::size_t size() const { return nr * nz; }
    std::size_t index(std::size_t ir, std::size_t iz) const { return ir * nz + iz; }
    double radial_extent() const { return static_cast<double>(nr - 1) * dr; }
    double depth_extent() const { return static_cast<double>(nz - 1) * dz; }
};

enum class FarBoundary {
    ambient,    // outer radius and bottom held at grid.ambient
    insulated,  // zero flux everywhere (conservation tests)
};

struct BoundarySpec {
    FarBoundary far = FarBoundary::ambient;
    double surface_heat_transfer = 0.0;  // W/(m^2 K), convective loss at z = 0
};

class TemperatureField {
public:
    TemperatureField() = default;
    TemperatureField(GridSpec grid, double initial);
    TemperatureField(GridSpec grid, std::vector<double> values);

    static TemperatureField uniform(const GridSpec& grid) { return {grid, grid.ambient}; }

    const GridSpec& grid() const { return grid_; }
    double at(std::size_t ir, std::size_t iz) const { return values_[grid_.index(ir, iz)]; }
    double& at(std::size_t ir, std::size_t iz) { return values_[grid_.index(ir, iz)]; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    bool all_finite() const;

private:
    GridSpec grid_;
    std::vector<double> values_;
};

// Control volume of every node (m^3), same layout as the field.
std::vector<double> cell_volumes(const GridSpec& grid);

// Finite-volume stencil weights for the grid (zero flux across every outer face).
simd::Stencil make_stencil(const GridSpec& grid);

// (1/r) d/dr(r dT/dr) + d2T/dz2, K/m^2. The outer faces are treated as
// zero-flux; the axis row uses 4 (T1 - T0) / dr^2.
std::vector<double> axisymmetric_laplacian(const TemperatureField& field);

// Q(r, z) = mu_a * I_peak * exp(-2 r^2 / w(d_f)^2) * exp(-mu_a z), W/m^3.
std::vector<double> deposit_source(const optics::BeamSpec& beam, double peak_intensity,
                                   double focal_distance, const TissueProperties& props,
                                   const GridSpec& grid);

// Largest explicit substep that keeps every node update a convex combination
// (0.9 of the positivity limit set by the axis node).
double max_stable_substep(const TissueProperties& props, const GridSpec& grid);

// Total thermal energy sum(c_v * T * V), J (relative to 0 degC).
double thermal_energy(const TemperatureField& field, const TissueProperties& props);

// Owns the stencil and scratch storage for repeated steps on one grid.
class HeatSolver {
public:
    HeatSolver(GridSpec grid, TissueProperties props, BoundarySpec boundary = {});

    // Advances `field` by dt with forward Euler, splitting into equal substeps
    // no larger than max_stable_substep(). `source` may be empty.
    // Throws NumericalBlowup if the result is not finite.
    void advance(TemperatureField& field, std::span<const double> source, double dt);

    std::size_t substeps_for(double dt) const;
    std::size_t last_substeps() const { return last_substeps_; }
    const GridSpec& grid() const { return grid_; }
    const TissueProperties& properties() const { return props_; }

private:
    GridSpec grid_;
    TissueProperties props_;
    BoundarySpec boundary_;
    simd::Stencil stencil_;
    double max_substep_;
    std::vector<double> scratch_;
    std::size_t last_substeps_ = 0;
};

// Stateless convenience wrapper around HeatSolver::advance.
TemperatureField step(const TemperatureField& field, const TissueProperties& props,
                      std::span<const double> source, double dt, BoundarySpec boundary = {});

struct SurfaceFrame {
    std::vector<double> radial_samples;  // degC at r = k * pixel_pitch
    double pixel_pitch = 0.0;            // m
    double peak = 0.0;                   // degC, the r = 0 sample
    double timestamp = 0.0;              // s
};

// Emulated thermal camera: linear interpolation of T(r, 0) at multiples of
// pixel_pitch, plus i.i.d. Gaussian noise. noise_sigma == 0 draws nothing
// from `rng`.
SurfaceFrame surface_readout(const TemperatureField& field, double pixel_pitch, double noise_sigma,
                             std::mt19937_64& rng, double timestamp = 0.0);

}  // namespace thermolase::thermal
