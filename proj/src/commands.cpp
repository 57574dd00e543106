#include "pentimento/commands.hpp"

#include "pentimento/assets.hpp"
#include "pentimento/errors.hpp"
#include "pentimento/model_fit.hpp"
#include "pentimento/recovery.hpp"
#include "pentimento/run_config.hpp"
#include "pentimento/series_io.hpp"
#include "pentimento/svg_plot.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace pentimento {

namespace {

void write_output(const std::string& path, const std::string& content, std::ostream& fallback) {
    if (path.empty() || path == "-") {
        fallback << content;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw DataError("cannot write '" + path + "'");
    f << content;
    f.close();
    if (!f)
        throw DataError("failed writing '" + path + "'");
}

} // namespace

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::optional<std::uint64_t> config,
                           std::uint64_t fallback) {
    if (flag)
        return *flag;
    if (config)
        return *config;
    if (const char* env = std::getenv("PENTIMENTO_SEED"); env && *env) {
        const std::string text = env;
        try {
            std::size_t used = 0;
            const auto v = std::stoull(text, &used, 0);
            if (used == text.size() && text.front() != '-')
                return v;
        } catch (const std::exception&) {
        }
        throw DataError("PENTIMENTO_SEED must be a non-negative integer, got '" + text + "'");
    }
    return fallback;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ModelError*>(&e))
        return kExitModel;
    if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const ContractViolation*>(&e))
        return kExitData;
    return kExitModel;
}

void cmd_simulate(const SimulateArgs& args, std::ostream& out) {
    const std::string text = read_file(args.config_path);
    RunConfig cfg = parse_run_config(text, args.config_path);
    if (args.hours_per_step) {
        if (!(*args.hours_per_step > 0.0))
            throw DataError("--hours-per-step must be positive");
        cfg.hours_per_step = *args.hours_per_step;
    }
    const std::uint64_t seed = resolve_seed(args.seed, cfg.seed);
    const auto routes = cfg.routes();
    const auto burn = cfg.burn(seed);
    const auto schedule = cfg.schedule();

    RunOptions options;
    options.execution = args.serial ? Execution::Serial : Execution::Parallel;
    const auto result = run_schedule(routes, burn, schedule, cfg.environment(), seed, options);

    std::ostringstream csv;
    write_experiment_csv(csv, result.series, routes, args.omit_truth ? nullptr : &burn);
    write_output(args.out_path, csv.str(), out);

    RunManifest manifest;
    manifest.config_sha256 = sha256_hex(text);
    manifest.seed = seed;
    manifest.start_hour = 0.0;
    manifest.end_hour = result.final_hour;
    if (!args.out_path.empty() && args.out_path != "-")
        manifest.outputs.push_back(args.out_path);
    std::string manifest_path = args.manifest_path;
    if (manifest_path.empty() && !args.out_path.empty() && args.out_path != "-")
        manifest_path = args.out_path + ".manifest.json";
    if (!manifest_path.empty())
        write_output(manifest_path, manifest.to_json(), out);
}

void cmd_attack(const AttackArgs& args, std::ostream& out) {
    const auto data = read_experiment_csv_file(args.csv_path);
    std::vector<BitVerdict> verdicts;
    if (args.mode == "tm1") {
        Tm1Options o;
        if (args.bandwidth_hours)
            o.bandwidth_hours = *args.bandwidth_hours;
        verdicts = classify_tm1(data.routes, o);
    } else if (args.mode == "tm2") {
        Tm2Options o;
        if (args.bandwidth_hours)
            o.bandwidth_hours = *args.bandwidth_hours;
        if (args.acquired_at_hours)
            o.acquired_at_hours = *args.acquired_at_hours;
        verdicts = classify_tm2(data.routes, o);
    } else {
        throw DataError("unknown attack mode '" + args.mode + "' (expected tm1 or tm2)");
    }

    std::optional<AccuracyReport> report;
    if (data.truth)
        report = score(verdicts, *data.truth, data.lengths_ps());

    std::ostringstream csv;
    write_verdict_csv(csv, verdicts);
    write_output(args.out_path, csv.str(), out);
    write_output(args.summary_path,
                 attack_summary_json(args.mode, verdicts, report ? &*report : nullptr), out);
}

void cmd_profile(const ProfileArgs& args, std::ostream& out) {
    const auto records = read_asset_csv_file(args.csv_path);
    if (!(args.burn_hours >= 0.0))
        throw DataError("--burn-hours must be non-negative");
    const Regime regime = parse_regime(args.regime);
    const Environment env = regime == Regime::Lab ? Environment::lab() : Environment::cloud();

    std::ostringstream stats, vuln;
    write_stats_csv(stats, records);
    write_vulnerability_csv(vuln, records, args.burn_hours, env, args.threshold_ps);
    write_output(args.stats_path, stats.str(), out);
    write_output(args.vulnerability_path, vuln.str(), out);
}

void cmd_plot(const PlotArgs& args, std::ostream& out) {
    const auto data = read_experiment_csv_file(args.csv_path);
    PlotOptions options;
    if (!args.title.empty())
        options.title = args.title;
    write_output(args.out_path, render_svg(data, options), out);
}

void cmd_calibrate_model(const CalibrateModelArgs& args, std::ostream& out) {
    FitTargets targets;
    targets.fast_crossing_hours = args.fast_crossing_hours;
    targets.slow_residual_ps = args.slow_residual_ps;
    FitResult fit;
    try {
        fit = fit_model(targets);
    } catch (const ContractViolation& e) {
        throw ModelError(std::string("model fit failed: ") + e.what());
    }
    const auto& m = fit.model;
    out << "fitted degradation constants\n";
    out << fmt::format("  amplitude_ps          {:.6e}  (per stage at 1 h)\n", m.amplitude_ps);
    out << fmt::format("  time_exponent         {:.3f}  (fixed)\n", m.time_exponent);
    out << fmt::format("  endpoint_stages       {:.3f}\n", m.endpoint_stages);
    out << fmt::format("  recovery_tau_fall_h   {:.3f}\n", m.recovery_tau_fall_h);
    out << fmt::format("  recovery_tau_rise_h   {:.3f}\n", m.recovery_tau_rise_h);
    out << "anchor residuals (fitted - target, ps)\n";
    for (std::size_t i = 0; i < targets.anchors.size(); ++i)
        out << fmt::format("  {:>7.0f} ps  target {:6.2f}  residual {:+.4f}\n",
                           targets.anchors[i].first, targets.anchors[i].second,
                           fit.anchor_residuals_ps[i]);
    out << fmt::format("fast recovery crossing  {:.3f} h (target {:.3f} h)\n",
                       fit.fast_crossing_hours, targets.fast_crossing_hours);
    out << fmt::format("slow recovery residual  {:.4f} ps (target {:.4f} ps)\n",
                       fit.slow_residual_ps, targets.slow_residual_ps);
}

} // namespace pentimento
