#pragma once

#include "pentimento/bti.hpp"
#include "pentimento/kernels.hpp"
#include "pentimento/tdc.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pentimento {

/// One burn bit per route.
struct BurnVector {
    std::vector<int> bits;

    static BurnVector random(std::size_t n, std::uint64_t seed);
    BurnVector complement() const;
    std::size_t size() const { return bits.size(); }
};

enum class ValueSource { Burn, Complement, AllZero, AllOne };

struct CalibratePhase {
    friend bool operator==(const CalibratePhase&, const CalibratePhase&) = default;
};
struct ConditionPhase {
    ValueSource source = ValueSource::Burn;
    double hours = 1.0;
    friend bool operator==(const ConditionPhase&, const ConditionPhase&) = default;
};
struct MeasurePhase {
    friend bool operator==(const MeasurePhase&, const MeasurePhase&) = default;
};

using Phase = std::variant<CalibratePhase, ConditionPhase, MeasurePhase>;

/// Where Measure phases get their theta_init from.
enum class ThetaSource {
    Calibration,  // a Calibrate phase on the device under test
    FleetTable,   // a table taken once on a reference device of the same type
};

struct Schedule {
    std::vector<Phase> phases;
    ThetaSource theta_source = ThetaSource::Calibration;

    /// Throws ScheduleError when the phase list is malformed.
    void validate() const;
    double total_hours() const;

    /// Calibrate at hour 0, measure, then burn X and recover under its
    /// complement for 200 h each, measuring after every step.
    static Schedule experiment1(double hours_per_step = 1.0);
    /// Calibrate, measure, then 200 h of burn with a measurement after each step.
    static Schedule experiment2(double hours_per_step = 1.0);
    /// 200 h of victim burn without measurement, then 25 attacker iterations of
    /// (measure, hold all-zero for one step). Uses the fleet theta table.
    static Schedule experiment3(double hours_per_step = 1.0);
    static Schedule named(const std::string& name, double hours_per_step = 1.0);
};

/// Centred delay differences; every route shares the hour grid.
struct DelaySeries {
    std::vector<double> hours;
    std::vector<std::vector<double>> delta_ps;  // [route][point]

    bool empty() const { return hours.empty(); }
};

struct RunOptions {
    SensorConfig sensor;
    /// Lognormal spread of the per-route device age factor (cloud only).
    double age_spread_sigma = 0.2;
    Execution execution = Execution::Parallel;
    std::uint64_t fleet_reference_seed = 0xf1ee7ULL;
};

struct RunResult {
    DelaySeries series;
    std::vector<RouteState> final_states;
    std::vector<double> theta_init;
    std::vector<double> age_factor;  // per route
    double final_hour = 0.0;
};

RunResult run_schedule(std::span<const RouteSpec> routes, const BurnVector& burn,
                       const Schedule& schedule, const Environment& env, std::uint64_t seed,
                       const RunOptions& options = {});

inline constexpr double kStandardLengthsPs[] = {1000.0, 2000.0, 5000.0, 10000.0};

/// `per_class` routes for each nominal length, ids "0".."N-1" in class order.
std::vector<RouteSpec> standard_route_set(std::span<const double> lengths_ps = kStandardLengthsPs,
                                          int per_class = 16);

/// theta_init for fresh routes on a reference device; reused for every device
/// of the same type.
std::vector<double> fleet_theta_table(std::span<const RouteSpec> routes, const SensorConfig& cfg,
                                      double env_sigma_ps, std::uint64_t reference_seed);

} // namespace pentimento
