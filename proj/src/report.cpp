#include "thermolase/report.hpp"

#include <fmt/format.h>

#include <ostream>

#include "thermolase/config.hpp"

namespace thermolase::report {

using nlohmann::ordered_json;

namespace {

std::string join_columns(auto const& columns) {
    std::string out;
    for (std::string_view c : columns) {
        if (!out.empty()) out += ',';
        out += c;
    }
    return out;
}

}  // namespace

void write_series_csv(std::ostream& out, const harness::TrialResult& result) {
    out << join_columns(kSeriesColumns) << '\n';
    for (const harness::Sample& s : result.samples) {
        out << fmt::format("{},{},{},{},{},{},{}\n", s.t, s.reference, s.peak, s.conduction, s.command, s.applied,
                           s.focal_distance * 1e3);
    }
}

void write_aggregate_csv(std::ostream& out, const std::vector<harness::ConditionStats>& conditions) {
    out << join_columns(kAggregateColumns) << '\n';
    for (const harness::ConditionStats& c : conditions) {
        out << fmt::format("{},{},{}\n", c.name, c.mean_rmse, c.std_rmse);
    }
}

void write_field_csv(std::ostream& out, const thermal::TemperatureField& field, double t) {
    const thermal::GridSpec& g = field.grid();
    out << "nr,nz,dr_m,dz_m,t_s\n" << fmt::format("{},{},{},{},{}\n", g.nr, g.nz, g.dr, g.dz, t);
    for (std::size_t i = 0; i < g.nr; ++i) {
        for (std::size_t j = 0; j < g.nz; ++j) out << (j ? "," : "") << fmt::format("{}", field.at(i, j));
        out << '\n';
    }
}

ordered_json config_json(const harness::ExperimentConfig& c) {
    ordered_json j;
    j["name"] = c.name;
    j["seed"] = c.seed;
    j["beam"] = {{"wavelength_m", c.beam.wavelength}, {"waist_m", c.beam.waist}, {"power_w", c.beam.power}};
    j["tissue"] = {{"volumetric_heat_capacity_j_m3k", c.tissue.volumetric_heat_capacity},
                   {"thermal_conductivity_w_mk", c.tissue.thermal_conductivity},
                   {"absorption_coefficient_per_m", c.tissue.absorption_coefficient}};
    j["grid"] = {{"dr_m", c.grid.dr},
                 {"dz_m", c.grid.dz},
                 {"nr", c.grid.nr},
                 {"nz", c.grid.nz},
                 {"ambient_c", c.grid.ambient},
                 {"far_boundary", c.boundary.far == thermal::FarBoundary::ambient ? "ambient" : "insulated"},
                 {"surface_heat_transfer_w_m2k", c.boundary.surface_heat_transfer}};
    j["profile"] = {{"start_c", c.profile.start},
                    {"target_c", c.profile.target},
                    {"ramp_rate_k_s", c.profile.ramp_rate},
                    {"hold_s", c.profile.hold_duration}};
    j["controller"] = {{"coefficients", c.controller.coefficients},
                       {"gains", c.controller.gains},
                       {"lower", c.controller.lower},
                       {"upper", c.controller.upper}};
    j["actuator"] = {{"control_period_s", c.control_period},
                     {"rate_limit_m_s", c.actuator_rate_limit},
                     {"max_focal_distance_m", c.max_focal_distance}};
    j["sensor"] = {{"pixel_pitch_m", c.sensor.pixel_pitch}, {"noise_sigma_k", c.sensor.noise_sigma}};
    j["ini"] = config::write_ini(c);
    return j;
}

ordered_json summary_json(const harness::ExperimentConfig& config, const harness::TrialResult& result) {
    ordered_json j;
    j["name"] = result.name;
    j["seed"] = result.seed;
    j["rmse"] = result.rmse;
    j["ramp_rmse"] = result.phases.ramp_rmse;
    j["hold_rmse"] = result.phases.hold_rmse;
    j["hold_mean_error"] = result.phases.hold_mean_error;
    j["samples"] = result.samples.size();
    j["final_coefficients"] = result.final_coefficients;
    j["kernel_backend"] = result.kernel_backend;
    j["config"] = config_json(config);
    return j;
}

ordered_json schema_json() {
    return {{"series", {{"version", kSeriesSchemaVersion}, {"columns", kSeriesColumns}}},
            {"aggregate", {{"version", kAggregateSchemaVersion}, {"columns", kAggregateColumns}}}};
}

}  // namespace thermolase::report
