#pragma once

#include "pentimento/bti.hpp"

#include <utility>
#include <vector>

namespace pentimento {

/// Observations the degradation constants are fitted to.
struct FitTargets {
    /// (route length ps, |delta ps| after `anchor_hours` of Lab burn).
    std::vector<std::pair<double, double>> anchors{
        {1000.0, 1.5}, {2000.0, 2.5}, {5000.0, 5.5}, {10000.0, 10.5}};
    double anchor_hours = 200.0;
    /// Hours of complement conditioning after which the longest burn-1 anchor
    /// route first reaches |delta| <= recovery_threshold_ps.
    double fast_crossing_hours = 35.0;
    /// |delta| left on the shortest burn-0 anchor route after
    /// slow_check_hours of complement conditioning.
    double slow_residual_ps = 0.86;
    double slow_check_hours = 200.0;
    double recovery_threshold_ps = 0.5;
};

struct FitResult {
    DegradationModel model;
    std::vector<double> anchor_residuals_ps;  // fitted minus target, per anchor
    double fast_crossing_hours = 0.0;
    double slow_residual_ps = 0.0;
};

/// Least squares for the per-stage amplitude and the endpoint stage count,
/// then bisection on the two recovery time constants. Throws
/// ContractViolation when a target cannot be reached.
FitResult fit_model(const FitTargets& targets, const DegradationModel& start = default_model());

/// Lab delta of a burn-1 route of `length_ps` after `burn_hours`, followed by
/// `recover_hours` of complement conditioning.
double burn_then_recover(const DegradationModel& model, double length_ps, int burn_bit,
                         double burn_hours, double recover_hours);

/// First hour of complement conditioning at which |delta| <= threshold.
double recovery_crossing_hours(const DegradationModel& model, double length_ps, double burn_hours,
                               double threshold_ps);

} // namespace pentimento
