#include "pentimento/experiment.hpp"

#include "pentimento/errors.hpp"
#include "pentimento/random.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace pentimento {

namespace {

constexpr std::uint64_t kTagBurn = 0x6275726eULL;
constexpr std::uint64_t kTagSensor = 0x73656e73ULL;
constexpr std::uint64_t kTagAge = 0x616765ULL;
constexpr std::uint64_t kTagCalibrate = 0x63616cULL;
constexpr std::uint64_t kTagMeasure = 0x6d656173ULL;

int step_count(double total_hours, double hours_per_step) {
    if (!(hours_per_step > 0.0))
        throw ContractViolation("hours_per_step must be positive");
    return std::max(1, static_cast<int>(std::lround(total_hours / hours_per_step)));
}

void append_steps(std::vector<Phase>& phases, ValueSource source, double total_hours,
                  double hours_per_step) {
    const int steps = step_count(total_hours, hours_per_step);
    const double dt = total_hours / steps;
    for (int i = 0; i < steps; ++i) {
        phases.emplace_back(ConditionPhase{source, dt});
        phases.emplace_back(MeasurePhase{});
    }
}

int value_for(ValueSource source, int burn_bit) {
    switch (source) {
    case ValueSource::Burn: return burn_bit;
    case ValueSource::Complement: return 1 - burn_bit;
    case ValueSource::AllZero: return 0;
    case ValueSource::AllOne: return 1;
    }
    return 0;
}

} // namespace

// ---------------------------------------------------------------- burn vector

BurnVector BurnVector::random(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(derive_seed({seed, kTagBurn}));
    BurnVector v;
    v.bits.resize(n);
    for (auto& b : v.bits)
        b = static_cast<int>(rng() >> 63);
    return v;
}

BurnVector BurnVector::complement() const {
    BurnVector v = *this;
    for (auto& b : v.bits)
        b = 1 - b;
    return v;
}

// ---------------------------------------------------------------- schedule

void Schedule::validate() const {
    int calibrations = 0;
    bool burned = false;
    bool have_theta = theta_source == ThetaSource::FleetTable;
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const auto& p = phases[i];
        if (std::holds_alternative<CalibratePhase>(p)) {
            if (theta_source == ThetaSource::FleetTable)
                throw ScheduleError("phase " + std::to_string(i) +
                                    ": fleet-table schedules must not calibrate on the device");
            if (++calibrations > 1)
                throw ScheduleError("phase " + std::to_string(i) + ": more than one Calibrate");
            have_theta = true;
        } else if (const auto* c = std::get_if<ConditionPhase>(&p)) {
            if (!(c->hours >= 0.0) || !std::isfinite(c->hours))
                throw ScheduleError("phase " + std::to_string(i) + ": negative condition duration");
            burned = burned || c->source == ValueSource::Burn;
        } else {
            if (!have_theta)
                throw ScheduleError("phase " + std::to_string(i) + ": Measure before Calibrate");
            if (theta_source == ThetaSource::FleetTable && !burned)
                throw ScheduleError("phase " + std::to_string(i) +
                                    ": fleet-table flow measures before the victim burn");
        }
    }
}

double Schedule::total_hours() const {
    double h = 0.0;
    for (const auto& p : phases)
        if (const auto* c = std::get_if<ConditionPhase>(&p))
            h += c->hours;
    return h;
}

Schedule Schedule::experiment1(double hours_per_step) {
    Schedule s;
    s.phases.emplace_back(CalibratePhase{});
    s.phases.emplace_back(MeasurePhase{});
    append_steps(s.phases, ValueSource::Burn, 200.0, hours_per_step);
    append_steps(s.phases, ValueSource::Complement, 200.0, hours_per_step);
    return s;
}

Schedule Schedule::experiment2(double hours_per_step) {
    Schedule s;
    s.phases.emplace_back(CalibratePhase{});
    s.phases.emplace_back(MeasurePhase{});
    append_steps(s.phases, ValueSource::Burn, 200.0, hours_per_step);
    return s;
}

Schedule Schedule::experiment3(double hours_per_step) {
    Schedule s;
    s.theta_source = ThetaSource::FleetTable;
    s.phases.emplace_back(ConditionPhase{ValueSource::Burn, 200.0});
    const int steps = step_count(25.0, hours_per_step);
    const double dt = 25.0 / steps;
    for (int i = 0; i < steps; ++i) {
        s.phases.emplace_back(MeasurePhase{});
        s.phases.emplace_back(ConditionPhase{ValueSource::AllZero, dt});
    }
    return s;
}

Schedule Schedule::named(const std::string& name, double hours_per_step) {
    if (name == "experiment1")
        return experiment1(hours_per_step);
    if (name == "experiment2")
        return experiment2(hours_per_step);
    if (name == "experiment3")
        return experiment3(hours_per_step);
    throw DataError("unknown schedule '" + name +
                    "' (expected experiment1, experiment2 or experiment3)");
}

// ---------------------------------------------------------------- routes

std::vector<RouteSpec> standard_route_set(std::span<const double> lengths_ps, int per_class) {
    if (per_class < 1)
        throw ContractViolation("per_class must be positive");
    std::vector<RouteSpec> routes;
    routes.reserve(lengths_ps.size() * static_cast<std::size_t>(per_class));
    for (double len : lengths_ps)
        for (int i = 0; i < per_class; ++i)
            routes.push_back(make_route(std::to_string(routes.size()), len));
    return routes;
}

std::vector<double> fleet_theta_table(std::span<const RouteSpec> routes, const SensorConfig& cfg,
                                      double env_sigma_ps, std::uint64_t reference_seed) {
    std::vector<RouteState> states;
    std::vector<Sensor> sensors;
    states.reserve(routes.size());
    sensors.reserve(routes.size());
    for (std::size_t i = 0; i < routes.size(); ++i) {
        states.push_back(fresh_state(routes[i]));
        sensors.emplace_back(cfg, derive_seed({reference_seed, kTagSensor, i}));
    }
    std::vector<double> sigma(routes.size(), env_sigma_ps);
    std::vector<double> theta(routes.size());
    calibrate_routes(states, sensors, sigma, derive_seed({reference_seed, kTagCalibrate}), theta,
                     Execution::Parallel);
    return theta;
}

// ---------------------------------------------------------------- runner

RunResult run_schedule(std::span<const RouteSpec> routes, const BurnVector& burn,
                       const Schedule& schedule, const Environment& env, std::uint64_t seed,
                       const RunOptions& options) {
    if (burn.size() != routes.size())
        throw ContractViolation("burn vector length does not match the route count");
    env.validate();
    schedule.validate();
    options.sensor.validate();

    const std::size_t n = routes.size();
    RunResult result;
    result.final_states.reserve(n);
    result.age_factor.resize(n);

    std::vector<Environment> route_env(n, env);
    std::vector<Sensor> sensors;
    sensors.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        result.final_states.push_back(fresh_state(routes[i]));
        sensors.emplace_back(options.sensor, derive_seed({seed, kTagSensor, i}));
        if (env.regime == Regime::Cloud && options.age_spread_sigma > 0.0) {
            // Mean-one lognormal multiplier.
            SplitMix64 rng(derive_seed({seed, kTagAge, i}));
            std::normal_distribution<double> z(0.0, 1.0);
            const double s = options.age_spread_sigma;
            const double m = std::exp(s * z(rng) - 0.5 * s * s);
            route_env[i].device_age_factor = std::min(1.0, env.device_age_factor * m);
        }
        result.age_factor[i] = route_env[i].device_age_factor;
    }
    std::vector<double> sigma(n, env.noise_sigma_ps);

    auto& states = result.final_states;
    auto& theta = result.theta_init;
    if (schedule.theta_source == ThetaSource::FleetTable)
        theta = fleet_theta_table(routes, options.sensor, env.noise_sigma_ps,
                                  options.fleet_reference_seed);

    std::vector<StressSegment> segments(n);
    std::vector<DelayReading> readings(n);
    auto& series = result.series;
    series.delta_ps.assign(n, {});
    double hour = 0.0;
    std::uint64_t measurement = 0;

    for (const auto& phase : schedule.phases) {
        if (std::holds_alternative<CalibratePhase>(phase)) {
            theta.assign(n, 0.0);
            calibrate_routes(states, sensors, sigma, derive_seed({seed, kTagCalibrate}), theta,
                             options.execution);
        } else if (const auto* c = std::get_if<ConditionPhase>(&phase)) {
            for (std::size_t i = 0; i < n; ++i)
                segments[i] = StressSegment{c->hours, value_for(c->source, burn.bits[i]), route_env[i]};
            advance_routes(states, segments, options.execution);
            hour += c->hours;
        } else {
            if (theta.size() != n)
                throw ScheduleError("Measure requires theta_init but none is available");
            measure_routes(states, sensors, theta, sigma,
                           derive_seed({seed, kTagMeasure, measurement++}), readings,
                           options.execution);
            series.hours.push_back(hour);
            for (std::size_t i = 0; i < n; ++i)
                series.delta_ps[i].push_back(readings[i].delta_ps());
        }
    }

    for (auto& route_series : series.delta_ps) {
        if (route_series.empty())
            continue;
        const double origin = route_series.front();
        for (auto& v : route_series)
            v -= origin;
    }
    if (series.hours.empty())
        series.delta_ps.clear();
    result.final_hour = hour;
    return result;
}

} // namespace pentimento
