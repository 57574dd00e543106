#pragma once

#include <array>
#include <string>

namespace pentimento {

enum class Polarity { Rising, Falling };
enum class Regime { Lab, Cloud };

const char* to_string(Polarity p);
const char* to_string(Regime r);
Regime parse_regime(const std::string& text);

/// Operating conditions a route is held under.
struct Environment {
    Regime regime = Regime::Lab;
    double temperature_c = 60.0;
    double device_age_factor = 1.0;  // 1 = factory new
    double noise_sigma_ps = 0.05;    // independent jitter per capture

    static Environment lab();
    static Environment cloud();

    /// Throws ContractViolation when the regime invariants do not hold.
    void validate() const;
};

/// Delay of one programmable-routing stage; element_count = nominal / this.
inline constexpr double kRouteElementDelayPs = 10.0;

struct RouteSpec {
    std::string id;
    double nominal_delay_ps = 0.0;
    int element_count = 0;
};

/// Builds a RouteSpec, deriving element_count from the nominal delay.
RouteSpec make_route(std::string id, double nominal_delay_ps);

struct StressSegment {
    double duration_hours = 0.0;
    int logic_value = 0;
    Environment environment;
};

/// Accumulated BTI drift of a single route. Drift is tracked per transition
/// polarity: holding 1 slows the falling edge, holding 0 slows the rising edge.
struct RouteState {
    RouteSpec spec;
    double drift_rise_ps = 0.0;
    double drift_fall_ps = 0.0;
    std::array<double, 2> stress_hours_at_value{0.0, 0.0};

    double delta_ps() const { return drift_fall_ps - drift_rise_ps; }
    double total_stress_hours() const { return stress_hours_at_value[0] + stress_hours_at_value[1]; }
};

RouteState fresh_state(RouteSpec spec);

/// Constants of the degradation/recovery law.
///
/// Growth of the stressed component over a segment [T, T + dt] of the route's
/// cumulative stress clock is
///
///     amplitude * stages * accel(temp) * age * ((T + dt)^n - T^n)
///
/// capped at 2x the fresh-route 400 h value. `stages` is the route element
/// count plus a fixed number of endpoint stages (register output and CLB input
/// muxes) that engage over the first few hundred ps of route.
/// The unstressed component relaxes exponentially with a fast time constant
/// for the falling-edge (burn-1) drift and a slow one for the rising-edge
/// (burn-0) drift.
struct DegradationModel {
    double amplitude_ps;            // drift per stage at 1 h, 60 C, new device
    double time_exponent = 0.2;
    double endpoint_stages = 50.0;
    double endpoint_engage_ps = 150.0;
    double cap_reference_hours = 400.0;
    double cap_multiple = 2.0;
    double recovery_tau_fall_h = 14.0;
    double recovery_tau_rise_h = 600.0;
    double reference_temperature_c = 60.0;
    double temperature_scale_c = 30.0;

    DegradationModel();

    double effective_stages(double nominal_delay_ps) const;
    double temperature_acceleration(double temperature_c) const;
    /// Prefactor K such that a fresh route under constant stress reaches
    /// K * t^n after t hours.
    double prefactor(const RouteSpec& spec, const Environment& env) const;
    double prefactor(double nominal_delay_ps, const Environment& env) const;
};

const DegradationModel& default_model();

/// Advances a route through one constant-value stress segment.
/// Throws ContractViolation on a negative duration.
RouteState evolve(const RouteState& state, const StressSegment& segment,
                  const DegradationModel& model = default_model());

/// Nominal delay plus the accumulated drift for the given transition.
double true_delay(const RouteState& state, Polarity polarity);

/// |delta_ps| of a fresh route of the given length after a pure burn of
/// `hours`. Zero-length routes have no stages and never drift.
double burn_in_magnitude(double nominal_delay_ps, double hours, const Environment& env,
                         const DegradationModel& model = default_model());

} // namespace pentimento
