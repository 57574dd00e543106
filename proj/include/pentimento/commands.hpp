#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace pentimento {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitData = 2,
    kExitModel = 3,
};

/// Seed precedence: command-line flag, then config, then PENTIMENTO_SEED,
/// then `fallback`. Throws DataError when the environment value is not an
/// unsigned integer.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> config,
                           std::uint64_t fallback = 1);

struct SimulateArgs {
    std::string config_path;
    std::string out_path;       // experiment CSV
    std::string manifest_path;  // defaults to out_path + ".manifest.json"
    std::optional<std::uint64_t> seed;
    std::optional<double> hours_per_step;
    bool omit_truth = false;
    bool serial = false;
};

struct AttackArgs {
    std::string csv_path;
    std::string mode = "tm1";
    std::string out_path;      // verdict CSV; empty writes to `out`
    std::string summary_path;  // JSON summary; empty writes to `out`
    std::optional<double> bandwidth_hours;
    std::optional<double> acquired_at_hours;
};

struct ProfileArgs {
    std::string csv_path;
    std::string stats_path;          // empty writes to `out`
    std::string vulnerability_path;  // empty writes to `out`
    double burn_hours = 200.0;
    std::string regime = "lab";
    std::optional<double> threshold_ps;
};

struct PlotArgs {
    std::string csv_path;
    std::string out_path;  // empty writes to `out`
    std::string title;
};

struct CalibrateModelArgs {
    double fast_crossing_hours = 35.0;
    double slow_residual_ps = 0.86;
};

// Each command throws DataError/ModelError subclasses on failure; exit_code_for
// maps them onto the process exit status.
void cmd_simulate(const SimulateArgs& args, std::ostream& out);
void cmd_attack(const AttackArgs& args, std::ostream& out);
void cmd_profile(const ProfileArgs& args, std::ostream& out);
void cmd_plot(const PlotArgs& args, std::ostream& out);
void cmd_calibrate_model(const CalibrateModelArgs& args, std::ostream& out);

/// Runs `fn`, printing any error to `err`, and returns the exit status.
template <class Fn>
int run_command(Fn&& fn, std::ostream& err);

int exit_code_for(const std::exception& e);

} // namespace pentimento

#include <exception>
#include <ostream>

template <class Fn>
int pentimento::run_command(Fn&& fn, std::ostream& err) {
    try {
        fn();
        return kExitOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}
