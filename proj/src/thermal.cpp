#include "thermolase/thermal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "thermolase/error.hpp"

namespace thermolase::thermal {

using optics::kPi;

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// Largest per-node sum of stencil weights, 1/m^2.
double max_weight_sum(const simd::Stencil& s) {
    double radial = 0.0;
    for (std::size_t i = 0; i < s.nr; ++i) radial = std::max(radial, s.radial_plus[i] + s.radial_minus[i]);
    double axial = 0.0;
    for (std::size_t j = 0; j < s.nz; ++j) axial = std::max(axial, s.axial_plus[j] + s.axial_minus[j]);
    return radial + axial;
}

}  // namespace

void TissueProperties::validate() const {
    if (!positive_finite(volumetric_heat_capacity)) throw DomainError("volumetric heat capacity must be > 0");
    if (!positive_finite(thermal_conductivity)) throw DomainError("thermal conductivity must be > 0");
    if (!positive_finite(absorption_coefficient)) throw DomainError("absorption coefficient must be > 0");
}

void GridSpec::validate() const {
    if (!positive_finite(dr) || !positive_finite(dz)) throw DomainError("grid spacing must be > 0");
    if (nr < 8 || nz < 8) throw DomainError("grid needs at least 8 nodes per direction");
    if (!std::isfinite(ambient)) throw DomainError("ambient temperature must be finite");
}

TemperatureField::TemperatureField(GridSpec grid, double initial)
    : grid_(grid), values_(grid.size(), initial) {}

TemperatureField::TemperatureField(GridSpec grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw DomainError("field size does not match grid");
}

bool TemperatureField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

namespace {

// Radial extent [inner, outer] of node i's shell.
std::pair<double, double> shell(const GridSpec& g, std::size_t i) {
    const double inner = i == 0 ? 0.0 : (static_cast<double>(i) - 0.5) * g.dr;
    const double outer = i + 1 == g.nr ? static_cast<double>(i) * g.dr : (static_cast<double>(i) + 0.5) * g.dr;
    return {inner, outer};
}

double layer_height(const GridSpec& g, std::size_t j) {
    return (j == 0 || j + 1 == g.nz) ? 0.5 * g.dz : g.dz;
}

}  // namespace

std::vector<double> cell_volumes(const GridSpec& grid) {
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.nr; ++i) {
        const auto [inner, outer] = shell(grid, i);
        const double ring = kPi * (outer * outer - inner * inner);
        for (std::size_t j = 0; j < grid.nz; ++j) out[grid.index(i, j)] = ring * layer_height(grid, j);
    }
    return out;
}

simd::Stencil make_stencil(const GridSpec& grid) {
    simd::Stencil s;
    s.nr = grid.nr;
    s.nz = grid.nz;
    s.radial_plus.assign(grid.nr, 0.0);
    s.radial_minus.assign(grid.nr, 0.0);
    s.axial_plus.assign(grid.nz, 0.0);
    s.axial_minus.assign(grid.nz, 0.0);

    // Weight = face circumference / (dr * shell area); 2*pi cancels against pi.
    for (std::size_t i = 0; i < grid.nr; ++i) {
        const auto [inner, outer] = shell(grid, i);
        const double area_over_pi = outer * outer - inner * inner;
        const double ri = static_cast<double>(i);
        if (i + 1 < grid.nr) s.radial_plus[i] = 2.0 * (ri + 0.5) * grid.dr / (grid.dr * area_over_pi);
        if (i > 0) s.radial_minus[i] = 2.0 * (ri - 0.5) * grid.dr / (grid.dr * area_over_pi);
    }
    for (std::size_t j = 0; j < grid.nz; ++j) {
        const double h = layer_height(grid, j);
        if (j + 1 < grid.nz) s.axial_plus[j] = 1.0 / (grid.dz * h);
        if (j > 0) s.axial_minus[j] = 1.0 / (grid.dz * h);
    }
    return s;
}

std::vector<double> axisymmetric_laplacian(const TemperatureField& field) {
    const simd::Stencil s = make_stencil(field.grid());
    std::vector<double> out(field.grid().size());
    simd::laplacian(s, field.values(), out);
    return out;
}

std::vector<double> deposit_source(const optics::BeamSpec& beam, double peak_intensity,
                                   double focal_distance, const TissueProperties& props,
                                   const GridSpec& grid) {
    if (!(peak_intensity >= 0.0)) throw DomainError("peak intensity must be >= 0");
    std::vector<double> q(grid.size(), 0.0);
    if (peak_intensity == 0.0) return q;

    const double w = optics::spot_radius_at(beam, focal_distance);
    const double mu = props.absorption_coefficient;
    std::vector<double> depth(grid.nz);
    for (std::size_t j = 0; j < grid.nz; ++j) depth[j] = std::exp(-mu * static_cast<double>(j) * grid.dz);

    for (std::size_t i = 0; i < grid.nr; ++i) {
        const double r = static_cast<double>(i) * grid.dr;
        const double lateral = mu * peak_intensity * std::exp(-2.0 * r * r / (w * w));
        for (std::size_t j = 0; j < grid.nz; ++j) q[grid.index(i, j)] = lateral * depth[j];
    }
    return q;
}

double max_stable_substep(const TissueProperties& props, const GridSpec& grid) {
    return 0.9 / (props.diffusivity() * max_weight_sum(make_stencil(grid)));
}

double thermal_energy(const TemperatureField& field, const TissueProperties& props) {
    const std::vector<double> vol = cell_volumes(field.grid());
    const auto t = field.values();
    double sum = 0.0;
    for (std::size_t k = 0; k < vol.size(); ++k) sum += t[k] * vol[k];
    return props.volumetric_heat_capacity * sum;
}

HeatSolver::HeatSolver(GridSpec grid, TissueProperties props, BoundarySpec boundary)
    : grid_(grid), props_(props), boundary_(boundary), stencil_(make_stencil(grid)),
      scratch_(grid.size()) {
    grid_.validate();
    props_.validate();
    if (!(boundary_.surface_heat_transfer >= 0.0)) throw DomainError("surface heat transfer must be >= 0");
    // The convective term adds h * (2/dz) / kappa to the surface node's weight sum.
    const double loss_weight = boundary_.surface_heat_transfer * 2.0 / grid_.dz / props_.thermal_conductivity;
    max_substep_ = 0.9 / (props_.diffusivity() * (max_weight_sum(stencil_) + loss_weight));
}

std::size_t HeatSolver::substeps_for(double dt) const {
    const double n = std::ceil(dt / max_substep_ * (1.0 - 1e-12));
    return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

void HeatSolver::advance(TemperatureField& field, std::span<const double> source, double dt) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("time step must be > 0");
    if (field.grid().size() != grid_.size()) throw DomainError("field grid does not match solver grid");

    const std::size_t n = substeps_for(dt);
    const double h = dt / static_cast<double>(n);
    simd::EulerParams params;
    params.diffusion_scale = h * props_.diffusivity();
    params.source_scale = h / props_.volumetric_heat_capacity;
    params.surface_loss = h * boundary_.surface_heat_transfer * (2.0 / grid_.dz) / props_.volumetric_heat_capacity;
    params.ambient = grid_.ambient;

    const simd::Backend backend = simd::active_backend();
    auto values = field.values();
    for (std::size_t k = 0; k < n; ++k) {
        simd::euler_step(backend, stencil_, params, values, source, scratch_);
        if (boundary_.far == FarBoundary::ambient) {
            std::fill_n(scratch_.begin() + static_cast<std::ptrdiff_t>(grid_.index(grid_.nr - 1, 0)), grid_.nz,
                        grid_.ambient);
            for (std::size_t i = 0; i < grid_.nr; ++i) scratch_[grid_.index(i, grid_.nz - 1)] = grid_.ambient;
        }
        std::copy(scratch_.begin(), scratch_.end(), values.begin());
    }
    last_substeps_ = n;
    if (!field.all_finite()) throw NumericalBlowup("temperature field became non-finite");
}

TemperatureField step(const TemperatureField& field, const TissueProperties& props,
                      std::span<const double> source, double dt, BoundarySpec boundary) {
    HeatSolver solver(field.grid(), props, boundary);
    TemperatureField out = field;
    solver.advance(out, source, dt);
    return out;
}

SurfaceFrame surface_readout(const TemperatureField& field, double pixel_pitch, double noise_sigma,
                             std::mt19937_64& rng, double timestamp) {
    const GridSpec& g = field.grid();
    if (!(pixel_pitch >= g.dr)) throw DomainError("pixel pitch must be >= grid dr");
    if (!(noise_sigma >= 0.0)) throw DomainError("noise sigma must be >= 0");

    const double ratio = pixel_pitch / g.dr;
    const double stride = std::round(ratio);
    const bool aligned = std::abs(ratio - stride) < 1e-9;
    const std::size_t count = static_cast<std::size_t>(std::floor(g.radial_extent() / pixel_pitch + 1e-9)) + 1;

    SurfaceFrame frame;
    frame.pixel_pitch = pixel_pitch;
    frame.timestamp = timestamp;
    frame.radial_samples.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        double value;
        if (aligned) {
            value = field.at(std::min(g.nr - 1, k * static_cast<std::size_t>(stride)), 0);
        } else {
            const double x = static_cast<double>(k) * ratio;
            const std::size_t i0 = std::min(g.nr - 2, static_cast<std::size_t>(x));
            const double frac = x - static_cast<double>(i0);
            value = field.at(i0, 0) + frac * (field.at(i0 + 1, 0) - field.at(i0, 0));
        }
        frame.radial_samples[k] = value;
    }
    if (noise_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, noise_sigma);
        for (double& v : frame.radial_samples) v += noise(rng);
    }
    frame.peak = frame.radial_samples.front();
    return frame;
}

}  // namespace thermolase::thermal
