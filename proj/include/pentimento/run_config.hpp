#pragma once

#include "pentimento/experiment.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pentimento {

/// Parsed simulation config. The schema is described in README.md.
struct RunConfig {
    int routes_per_class = 16;
    std::vector<double> lengths_ps{std::begin(kStandardLengthsPs), std::end(kStandardLengthsPs)};
    std::optional<std::uint64_t> burn_seed;
    std::optional<std::vector<int>> burn_bits;
    /// Named schedule ("experiment1".."experiment3"); empty when `phases` is used.
    std::string schedule_name;
    std::vector<Phase> phases;
    ThetaSource theta_source = ThetaSource::Calibration;
    Regime regime = Regime::Lab;
    std::optional<std::uint64_t> seed;
    double hours_per_step = 1.0;
    std::optional<double> temperature_c;
    std::optional<double> device_age_factor;
    std::optional<double> noise_sigma_ps;

    std::vector<RouteSpec> routes() const;
    /// Named schedules are expanded at `hours_per_step`.
    Schedule schedule() const;
    Environment environment() const;
    /// Explicit bits when given, otherwise a random vector from burn_seed
    /// (falling back to `run_seed`).
    BurnVector burn(std::uint64_t run_seed) const;
};

/// Parses YAML text. Errors are DataError with a "line N:" prefix; `origin`
/// names the source in messages.
RunConfig parse_run_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_run_config(const std::string& path);

/// Parses one phase string: "calibrate", "measure", or
/// "condition <burn|complement|zero|one> <hours>".
Phase parse_phase(const std::string& text);

} // namespace pentimento
