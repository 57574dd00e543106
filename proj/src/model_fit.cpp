#include "pentimento/model_fit.hpp"

#include "pentimento/errors.hpp"

#include <cmath>
#include <limits>

namespace pentimento {

namespace {

template <class F>
double bisect(F f, double lo, double hi, double target) {
    // f is increasing on [lo, hi].
    if (f(lo) > target || f(hi) < target)
        throw ContractViolation("recovery target lies outside the searchable range");
    for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < target ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

double burn_then_recover(const DegradationModel& model, double length_ps, int burn_bit,
                         double burn_hours, double recover_hours) {
    const Environment env = Environment::lab();
    auto s = fresh_state(make_route("fit", length_ps));
    s = evolve(s, StressSegment{burn_hours, burn_bit, env}, model);
    s = evolve(s, StressSegment{recover_hours, 1 - burn_bit, env}, model);
    return s.delta_ps();
}

double recovery_crossing_hours(const DegradationModel& model, double length_ps, double burn_hours,
                               double threshold_ps) {
    // delta falls monotonically under complement conditioning of a burn-1 route.
    auto delta = [&](double h) { return burn_then_recover(model, length_ps, 1, burn_hours, h); };
    if (delta(0.0) <= threshold_ps)
        return 0.0;
    double hi = 1.0;
    while (delta(hi) > threshold_ps) {
        hi *= 2.0;
        if (hi > 1e6)
            return std::numeric_limits<double>::infinity();
    }
    return bisect([&](double h) { return -delta(h); }, 0.0, hi, -threshold_ps);
}

FitResult fit_model(const FitTargets& targets, const DegradationModel& start) {
    if (targets.anchors.size() < 2)
        throw ContractViolation("need at least two anchors to fit amplitude and endpoint stages");
    FitResult r;
    r.model = start;
    auto& m = r.model;

    // delta(L) = a * t^n * (elements(L) + e * engage(L)) is linear in (a, a*e).
    const double tn = std::pow(targets.anchor_hours, m.time_exponent);
    double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
    for (const auto& [len, target] : targets.anchors) {
        const double x1 = std::max(1.0, std::round(len / kRouteElementDelayPs)) * tn;
        const double x2 = (1.0 - std::exp(-len / m.endpoint_engage_ps)) * tn;
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        b1 += x1 * target;
        b2 += x2 * target;
    }
    const double det = s11 * s22 - s12 * s12;
    if (std::abs(det) < 1e-12 * s11 * s22)
        throw ContractViolation("anchor lengths do not separate the two stage terms");
    const double a = (s22 * b1 - s12 * b2) / det;
    const double ae = (s11 * b2 - s12 * b1) / det;
    if (!(a > 0.0))
        throw ContractViolation("fitted amplitude is not positive");
    m.amplitude_ps = a;
    m.endpoint_stages = ae / a;

    for (const auto& [len, target] : targets.anchors)
        r.anchor_residuals_ps.push_back(
            burn_in_magnitude(len, targets.anchor_hours, Environment::lab(), m) - target);

    double longest = targets.anchors.front().first, shortest = longest;
    for (const auto& [len, target] : targets.anchors) {
        longest = std::max(longest, len);
        shortest = std::min(shortest, len);
    }

    m.recovery_tau_fall_h = bisect(
        [&](double tau) {
            DegradationModel trial = m;
            trial.recovery_tau_fall_h = tau;
            return recovery_crossing_hours(trial, longest, targets.anchor_hours,
                                           targets.recovery_threshold_ps);
        },
        0.01, 1e4, targets.fast_crossing_hours);
    r.fast_crossing_hours = recovery_crossing_hours(m, longest, targets.anchor_hours,
                                                    targets.recovery_threshold_ps);

    m.recovery_tau_rise_h = bisect(
        [&](double tau) {
            DegradationModel trial = m;
            trial.recovery_tau_rise_h = tau;
            return -burn_then_recover(trial, shortest, 0, targets.anchor_hours,
                                      targets.slow_check_hours);
        },
        0.01, 1e7, targets.slow_residual_ps);
    r.slow_residual_ps =
        -burn_then_recover(m, shortest, 0, targets.anchor_hours, targets.slow_check_hours);
    return r;
}

} // namespace pentimento
