#include "pentimento/bti.hpp"

#include "pentimento/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pentimento {

const char* to_string(Polarity p) { return p == Polarity::Rising ? "rising" : "falling"; }

const char* to_string(Regime r) { return r == Regime::Lab ? "lab" : "cloud"; }

Regime parse_regime(const std::string& text) {
    if (text == "lab" || text == "Lab")
        return Regime::Lab;
    if (text == "cloud" || text == "Cloud")
        return Regime::Cloud;
    throw DataError("unknown regime '" + text + "' (expected lab or cloud)");
}

Environment Environment::lab() { return Environment{Regime::Lab, 60.0, 1.0, 0.05}; }

Environment Environment::cloud() { return Environment{Regime::Cloud, 60.0, 0.12, 0.10}; }

void Environment::validate() const {
    if (!(device_age_factor > 0.0 && device_age_factor <= 1.0))
        throw ContractViolation("device_age_factor must lie in (0, 1]");
    if (!(noise_sigma_ps >= 0.0))
        throw ContractViolation("noise_sigma_ps must be nonnegative");
    if (regime == Regime::Lab && device_age_factor != 1.0)
        throw ContractViolation("lab regime assumes a factory-new device (age factor 1)");
    if (regime == Regime::Cloud && !(device_age_factor < 1.0 && noise_sigma_ps > 0.0))
        throw ContractViolation("cloud regime requires age factor < 1 and nonzero noise");
}

RouteSpec make_route(std::string id, double nominal_delay_ps) {
    if (!(nominal_delay_ps > 0.0) || !std::isfinite(nominal_delay_ps))
        throw ContractViolation("route '" + id + "' needs a positive nominal delay");
    const auto elements = std::max(1L, std::lround(nominal_delay_ps / kRouteElementDelayPs));
    return RouteSpec{std::move(id), nominal_delay_ps, static_cast<int>(elements)};
}

RouteState fresh_state(RouteSpec spec) {
    RouteState s;
    s.spec = std::move(spec);
    return s;
}

DegradationModel::DegradationModel()
    // 0.01 ps of drift per stage after 200 h at 60 C on a new device.
    : amplitude_ps(0.01 / std::pow(200.0, 0.2)) {}

double DegradationModel::effective_stages(double nominal_delay_ps) const {
    if (nominal_delay_ps <= 0.0)
        return 0.0;
    const double elements =
        std::max(1.0, std::round(nominal_delay_ps / kRouteElementDelayPs));
    return elements + endpoint_stages * (1.0 - std::exp(-nominal_delay_ps / endpoint_engage_ps));
}

double DegradationModel::temperature_acceleration(double temperature_c) const {
    return std::exp((temperature_c - reference_temperature_c) / temperature_scale_c);
}

double DegradationModel::prefactor(double nominal_delay_ps, const Environment& env) const {
    return amplitude_ps * effective_stages(nominal_delay_ps) *
           temperature_acceleration(env.temperature_c) * env.device_age_factor;
}

double DegradationModel::prefactor(const RouteSpec& spec, const Environment& env) const {
    return prefactor(spec.nominal_delay_ps, env);
}

const DegradationModel& default_model() {
    static const DegradationModel model;
    return model;
}

RouteState evolve(const RouteState& state, const StressSegment& segment,
                  const DegradationModel& model) {
    const double dt = segment.duration_hours;
    if (!(dt >= 0.0) || !std::isfinite(dt))
        throw ContractViolation("stress segment duration must be a finite nonnegative number");
    if (segment.logic_value != 0 && segment.logic_value != 1)
        throw ContractViolation("logic_value must be 0 or 1");
    if (!(segment.environment.device_age_factor > 0.0))
        throw ContractViolation("device_age_factor must be positive");

    RouteState next = state;
    if (dt == 0.0)
        return next;

    const double k = model.prefactor(state.spec, segment.environment);
    const double n = model.time_exponent;
    const double t0 = state.total_stress_hours();
    const double growth = k * (std::pow(t0 + dt, n) - std::pow(t0, n));
    const double cap = model.cap_multiple * k * std::pow(model.cap_reference_hours, n);

    auto grow = [&](double drift) { return std::min(drift + growth, std::max(drift, cap)); };

    if (segment.logic_value == 1) {
        next.drift_fall_ps = grow(state.drift_fall_ps);
        next.drift_rise_ps = state.drift_rise_ps * std::exp(-dt / model.recovery_tau_rise_h);
    } else {
        next.drift_rise_ps = grow(state.drift_rise_ps);
        next.drift_fall_ps = state.drift_fall_ps * std::exp(-dt / model.recovery_tau_fall_h);
    }
    next.stress_hours_at_value[segment.logic_value] += dt;
    return next;
}

double true_delay(const RouteState& state, Polarity polarity) {
    return state.spec.nominal_delay_ps +
           (polarity == Polarity::Rising ? state.drift_rise_ps : state.drift_fall_ps);
}

double burn_in_magnitude(double nominal_delay_ps, double hours, const Environment& env,
                         const DegradationModel& model) {
    if (!(hours >= 0.0))
        throw ContractViolation("burn duration must be nonnegative");
    if (nominal_delay_ps <= 0.0)
        return 0.0;
    const double k = model.prefactor(nominal_delay_ps, env);
    const double cap = model.cap_multiple * k * std::pow(model.cap_reference_hours, model.time_exponent);
    return std::min(k * std::pow(hours, model.time_exponent), cap);
}

} // namespace pentimento
