#include <CLI11.hpp>

#include <iostream>

#include "thermolase/cli.hpp"

int main(int argc, char** argv) {
    using namespace thermolase::cli;

    CLI::App app{"Closed-loop simulation of focus-regulated laser heating"};
    app.set_version_flag("--version", std::string(version()));
    app.require_subcommand(1);

    SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Run one trial and write series.csv, summary.json, manifest.json");
    simulate->add_option("--config", sim.config_path, "Experiment config (INI)")->required();
    simulate->add_option("--out", sim.output_dir, "Output directory")->required();
    simulate->add_option("--seed", sim.seed, "Override [run] seed");
    simulate->add_option("--snapshots", sim.snapshot_interval, "Dump the (r,z) field every S seconds");

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run every [sweep] condition and aggregate RMSE");
    sweep_cmd->add_option("--config", sweep.config_path, "Experiment config (INI)")->required();
    sweep_cmd->add_option("--out", sweep.output_dir, "Output directory")->required();
    sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (default: THERMOLASE_THREADS or all cores)");

    SpotTableOptions spot;
    auto* spot_cmd = app.add_subcommand("spot-table", "Print spot radius and peak intensity against focal distance");
    spot_cmd->add_option("--wavelength-um", spot.wavelength_um)->required();
    spot_cmd->add_option("--waist-mm", spot.waist_mm)->required();
    spot_cmd->add_option("--power-w", spot.power_w)->required();
    spot_cmd->add_option("--max-df-mm", spot.max_df_mm)->required();
    spot_cmd->add_option("--step-mm", spot.step_mm)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (*simulate) return cmd_simulate(sim, std::cerr);
    if (*sweep_cmd) return cmd_sweep(sweep, std::cerr);
    return cmd_spot_table(spot, std::cout, std::cerr);
}
