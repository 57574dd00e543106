#include "pentimento/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace pentimento;

int main(int argc, char** argv) {
    CLI::App app{"FPGA BTI data-remanence simulator and attack toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run a phase schedule and write the experiment CSV");
    simulate->add_option("config", sim.config_path, "YAML run config")->required();
    simulate->add_option("-o,--out", sim.out_path, "Experiment CSV to write")->required();
    simulate->add_option("--manifest", sim.manifest_path, "Manifest path (default <out>.manifest.json)");
    simulate->add_option("--seed", sim.seed, "Run seed (overrides config and PENTIMENTO_SEED)");
    simulate->add_option("--hours-per-step", sim.hours_per_step,
                         "Condition step length for named schedules (default 1)");
    simulate->add_flag("--no-truth", sim.omit_truth, "Omit the burn_bit column");
    simulate->add_flag("--serial", sim.serial, "Use the serial reference kernels");

    AttackArgs atk;
    auto* attack = app.add_subcommand("attack", "Classify routes from an experiment CSV");
    attack->add_option("csv", atk.csv_path, "Experiment CSV")->required();
    attack->add_option("-m,--mode", atk.mode, "tm1 (burn window) or tm2 (recovery window)")
        ->check(CLI::IsMember({"tm1", "tm2"}));
    attack->add_option("-o,--out", atk.out_path, "Verdict CSV (default stdout)");
    attack->add_option("-s,--summary", atk.summary_path, "JSON summary (default stdout)");
    attack->add_option("--bandwidth", atk.bandwidth_hours, "Kernel bandwidth in hours");
    attack->add_option("--acquired-at", atk.acquired_at_hours, "TM2 window start hour (default 200)");

    ProfileArgs prof;
    auto* profile = app.add_subcommand("profile", "Route-length statistics and vulnerability per asset");
    profile->add_option("csv", prof.csv_path, "Asset CSV (asset_path,asset_type,length_ps)")->required();
    profile->add_option("--stats", prof.stats_path, "Stats CSV (default stdout)");
    profile->add_option("--vulnerability", prof.vulnerability_path, "Vulnerability CSV (default stdout)");
    profile->add_option("--burn-hours", prof.burn_hours, "Burn duration to evaluate");
    profile->add_option("--regime", prof.regime, "lab or cloud")->check(CLI::IsMember({"lab", "cloud"}));
    profile->add_option("--threshold", prof.threshold_ps, "Detectability threshold in ps");

    PlotArgs plt;
    auto* plot = app.add_subcommand("plot", "Render an experiment CSV as an SVG line chart");
    plot->add_option("csv", plt.csv_path, "Experiment CSV")->required();
    plot->add_option("-o,--out", plt.out_path, "SVG file (default stdout)");
    plot->add_option("--title", plt.title, "Chart title");

    CalibrateModelArgs fit;
    auto* calibrate = app.add_subcommand("calibrate-model", "Refit the degradation constants and print them");
    calibrate->add_option("--crossing-hours", fit.fast_crossing_hours,
                          "Hours for a 10000 ps burn-1 route to recover to 0.5 ps");
    calibrate->add_option("--slow-residual", fit.slow_residual_ps,
                          "|delta| left on a 1000 ps burn-0 route after 200 h of recovery");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    auto run = [&](auto fn) { return run_command(fn, std::cerr); };
    if (*simulate)
        return run([&] { cmd_simulate(sim, std::cout); });
    if (*attack)
        return run([&] { cmd_attack(atk, std::cout); });
    if (*profile)
        return run([&] { cmd_profile(prof, std::cout); });
    if (*plot)
        return run([&] { cmd_plot(plt, std::cout); });
    return run([&] { cmd_calibrate_model(fit, std::cout); });
}
