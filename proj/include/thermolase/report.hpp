#pragma once

// Serialization of trial and sweep results. Column order is fixed; bump
// kSeriesSchemaVersion whenever it changes.

#include <array>
#include <iosfwd>
#include <string_view>

#include <json.hpp>

#include "thermolase/harness.hpp"

namespace thermolase::report {

inline constexpr int kSeriesSchemaVersion = 1;
inline constexpr int kAggregateSchemaVersion = 1;

inline constexpr std::array<std::string_view, 7> kSeriesColumns = {
    "t", "r", "T_peak", "f", "I_cmd_Wcm2", "I_applied_Wcm2", "d_f_mm"};
inline constexpr std::array<std::string_view, 3> kAggregateColumns = {"condition", "mean_rmse", "std_rmse"};

// One row per control tick, shortest round-trip decimal formatting.
void write_series_csv(std::ostream& out, const harness::TrialResult& result);

void write_aggregate_csv(std::ostream& out, const std::vector<harness::ConditionStats>& conditions);

// Grid snapshot: a header row "nr,nz,dr_m,dz_m,t_s" and its values, then one
// row per radial index holding the nz temperatures (z fastest).
void write_field_csv(std::ostream& out, const thermal::TemperatureField& field, double t);

nlohmann::ordered_json config_json(const harness::ExperimentConfig& config);

// Config echo, seed, RMSE and phase statistics.
nlohmann::ordered_json summary_json(const harness::ExperimentConfig& config, const harness::TrialResult& result);

// Schema description recorded in run manifests.
nlohmann::ordered_json schema_json();

}  // namespace thermolase::report
