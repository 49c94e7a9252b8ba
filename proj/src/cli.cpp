#include "thermolase/cli.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "thermolase/config.hpp"
#include "thermolase/error.hpp"
#include "thermolase/report.hpp"

namespace thermolase::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

#ifndef THERMOLASE_VERSION
#define THERMOLASE_VERSION "0.0.0"
#endif

std::string_view version() { return THERMOLASE_VERSION; }

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

template <class Writer>
void write_file(const fs::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    writer(out);
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

void write_json(const fs::path& path, const ordered_json& j) {
    write_file(path, [&](std::ostream& out) { out << j.dump(2) << '\n'; });
}

ordered_json manifest(std::string_view command, const std::string& config_path, const fs::path& out_dir,
                      std::uint64_t seed, const std::vector<std::string>& files) {
    ordered_json m;
    m["tool"] = "thermolase";
    m["version"] = version();
    m["command"] = command;
    m["config_path"] = config_path;
    m["output_dir"] = out_dir.string();
    m["seed"] = seed;
    m["timestamp"] = utc_timestamp();
    m["kernel_backend"] = simd::backend_name(simd::active_backend());
    m["schemas"] = report::schema_json();
    m["files"] = files;
    return m;
}

// Maps library exceptions onto exit statuses.
template <class Body>
int guarded(std::ostream& log, Body&& body) {
    try {
        return body();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalBlowup& e) {
        log << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const DomainError& e) {
        log << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace

unsigned threads_from_env() {
    const char* value = std::getenv("THERMOLASE_THREADS");
    if (!value) return 0;
    char* end = nullptr;
    const long n = std::strtol(value, &end, 10);
    return (end != value && *end == '\0' && n > 0) ? static_cast<unsigned>(n) : 0;
}

int cmd_simulate(const SimulateOptions& options, std::ostream& log) {
    return guarded(log, [&] {
        harness::ExperimentConfig config = config::load(options.config_path).base;
        if (options.seed) config.seed = *options.seed;
        if (!(options.snapshot_interval >= 0.0)) throw ConfigError("--snapshots", "snapshot interval must be >= 0");

        const fs::path out_dir(options.output_dir);
        fs::create_directories(out_dir);
        std::vector<std::string> files{"series.csv", "summary.json", "config.ini"};

        harness::FieldObserver observer;
        if (options.snapshot_interval > 0.0) {
            fs::create_directories(out_dir / "fields");
            const auto every = static_cast<std::size_t>(
                std::max(1.0, std::round(options.snapshot_interval / config.control_period)));
            observer = [&, every, tick = std::size_t{0}](double t, const thermal::TemperatureField& field) mutable {
                if (tick++ % every != 0) return;
                const std::string name = fmt::format("fields/field_{:07.2f}.csv", t);
                write_file(out_dir / name, [&](std::ostream& out) { report::write_field_csv(out, field, t); });
                files.push_back(name);
            };
        }

        const harness::TrialResult result = harness::run_trial(config, observer);
        write_file(out_dir / "series.csv", [&](std::ostream& out) { report::write_series_csv(out, result); });
        write_json(out_dir / "summary.json", report::summary_json(config, result));
        write_file(out_dir / "config.ini", [&](std::ostream& out) { out << config::write_ini(config); });
        write_json(out_dir / "manifest.json",
                   manifest("simulate", options.config_path, out_dir, config.seed, files));
        log << fmt::format("{}: rmse {:.3f} K (ramp {:.3f}, hold {:.3f}) -> {}\n", result.name, result.rmse,
                           result.phases.ramp_rmse, result.phases.hold_rmse, out_dir.string());
        return kExitOk;
    });
}

int cmd_sweep(const SweepOptions& options, std::ostream& log) {
    return guarded(log, [&] {
        const config::LoadedConfig loaded = config::load(options.config_path);
        std::vector<harness::ExperimentConfig> conditions = loaded.conditions;
        if (conditions.empty()) conditions.push_back(loaded.base);

        const unsigned threads = options.threads ? options.threads : threads_from_env();
        const harness::SweepResult sweep = harness::run_sweep(conditions, threads);

        const fs::path out_dir(options.output_dir);
        fs::create_directories(out_dir);
        std::vector<std::string> files;
        std::size_t index = 0;
        for (const harness::ExperimentConfig& c : conditions) {
            for (std::size_t rep = 0; rep < c.trial_count; ++rep, ++index) {
                const harness::TrialResult& trial = sweep.trials[index];
                harness::ExperimentConfig echo = c;
                echo.seed = trial.seed;
                echo.trial_count = 1;
                const std::string dir = fmt::format("{}/rep_{:02d}", c.name, rep);
                fs::create_directories(out_dir / dir);
                write_file(out_dir / dir / "series.csv",
                           [&](std::ostream& out) { report::write_series_csv(out, trial); });
                write_json(out_dir / dir / "summary.json", report::summary_json(echo, trial));
                files.push_back(dir + "/series.csv");
                files.push_back(dir + "/summary.json");
            }
        }
        write_file(out_dir / "aggregate.csv",
                   [&](std::ostream& out) { report::write_aggregate_csv(out, sweep.conditions); });
        files.push_back("aggregate.csv");
        write_json(out_dir / "manifest.json", manifest("sweep", options.config_path, out_dir, loaded.base.seed, files));

        for (const harness::ConditionStats& s : sweep.conditions) {
            log << fmt::format("{:<12} n={} rmse {:.3f} +/- {:.3f} K\n", s.name, s.trials, s.mean_rmse, s.std_rmse);
        }
        return kExitOk;
    });
}

int cmd_spot_table(const SpotTableOptions& o, std::ostream& out, std::ostream& log) {
    return guarded(log, [&] {
        optics::BeamSpec beam{o.wavelength_um * 1e-6, o.waist_mm * 1e-3, o.power_w};
        beam.validate();
        if (!(o.step_mm > 0.0) || !std::isfinite(o.step_mm)) throw ConfigError("--step-mm", "step must be > 0");
        if (!(o.max_df_mm >= 0.0) || !std::isfinite(o.max_df_mm)) {
            throw ConfigError("--max-df-mm", "maximum focal distance must be >= 0");
        }
        const auto rows = static_cast<std::size_t>(std::floor(o.max_df_mm / o.step_mm + 1e-9)) + 1;
        out << "d_f_mm,spot_radius_mm,peak_intensity_Wcm2\n";
        for (std::size_t k = 0; k < rows; ++k) {
            const double df_mm = static_cast<double>(k) * o.step_mm;
            const double df = df_mm * 1e-3;
            out << fmt::format("{},{},{}\n", df_mm, optics::spot_radius_at(beam, df) * 1e3,
                               optics::peak_intensity_at(beam, df) / optics::kWattsPerCm2ToSI);
        }
        return kExitOk;
    });
}

}  // namespace thermolase::cli
