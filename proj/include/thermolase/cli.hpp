#pragma once

// Command implementations behind the `thermolase` executable. Each returns the
// process exit status: 0 ok, 2 configuration error, 3 numerical failure,
// 1 anything else (I/O).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace thermolase::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

std::string_view version();

struct SimulateOptions {
    std::string config_path;
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    double snapshot_interval = 0.0;  // s; 0 disables field dumps
};

struct SweepOptions {
    std::string config_path;
    std::string output_dir;
    unsigned threads = 0;  // 0 = THERMOLASE_THREADS or hardware concurrency
};

struct SpotTableOptions {
    double wavelength_um = 0.0;
    double waist_mm = 0.0;
    double power_w = 0.0;
    double max_df_mm = 0.0;
    double step_mm = 0.0;
};

// Writes series.csv, summary.json, config.ini and (last) manifest.json.
int cmd_simulate(const SimulateOptions& options, std::ostream& log);

// Writes <condition>/rep_NN/{series.csv,summary.json}, aggregate.csv and
// (last) manifest.json.
int cmd_sweep(const SweepOptions& options, std::ostream& log);

// Prints d_f_mm,spot_radius_mm,peak_intensity_Wcm2 rows to `out`.
int cmd_spot_table(const SpotTableOptions& options, std::ostream& out, std::ostream& log);

// THERMOLASE_THREADS when set to a positive integer, else 0.
unsigned threads_from_env();

}  // namespace thermolase::cli
