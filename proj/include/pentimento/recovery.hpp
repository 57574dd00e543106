#pragma once

#include "pentimento/experiment.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace pentimento {

/// One route's delay series as the attacker sees it. Carries no burn bit.
struct RouteSeries {
    std::string route_id;
    double length_ps = 0.0;
    std::vector<double> hours;
    std::vector<double> delta_ps;
};

/// Local-linear Gaussian kernel regression evaluated on the input grid.
/// Throws InsufficientDataError with fewer than two points and
/// ContractViolation for a non-positive bandwidth or mismatched lengths.
std::vector<double> kernel_smooth(std::span<const double> hours, std::span<const double> values,
                                  double bandwidth_hours);

struct BitVerdict {
    std::string route_id;
    int predicted = 0;
    double confidence = 0.0;  // in [0, 1]
};

struct Tm1Options {
    double bandwidth_hours = 10.0;
    int min_points = 10;
};

/// Threat Model 1: sign of the smoothed end-minus-start difference over the
/// burn window. A flat series is reported as bit 0 with confidence 0.
/// Confidence is |difference| over the median |difference| of the routes
/// with the same nominal length and the same prediction, clipped to 1.
std::vector<BitVerdict> classify_tm1(std::span<const RouteSeries> routes,
                                     const Tm1Options& options = {});

struct Tm2Options {
    double bandwidth_hours = 4.0;
    double acquired_at_hours = 200.0;
    double window_hours = 25.0;
    int min_points = 5;
};

/// Smoothed end-minus-start trend over the recovery window.
double window_trend(const RouteSeries& route, const Tm2Options& options);

/// Cut between the two groups of a 1-D two-means split, or NaN when all
/// values are equal.
double two_means_cut(std::span<const double> values);

/// Threat Model 2: within each length class the recovery-window trends are
/// split into two groups at the cut minimising the within-group sum of
/// squares, and routes in the lower (faster decreasing) group are called 1.
/// A class whose trends are all equal is called 0. Only points with
/// acquired_at <= hour < acquired_at + window are used.
/// Throws InsufficientDataError when fewer than min_points remain.
std::vector<BitVerdict> classify_tm2(std::span<const RouteSeries> routes,
                                     const Tm2Options& options = {});

struct ClassAccuracy {
    double length_ps = 0.0;
    int total = 0;
    int correct = 0;
    double accuracy() const { return total ? static_cast<double>(correct) / total : 0.0; }
};

struct AccuracyReport {
    int total = 0;
    int correct = 0;
    // confusion[truth][predicted]
    int confusion[2][2] = {{0, 0}, {0, 0}};
    std::vector<ClassAccuracy> per_class;  // ascending length

    double accuracy() const { return total ? static_cast<double>(correct) / total : 0.0; }
};

/// Compares verdicts with the true burn bits. `lengths_ps` gives the class of
/// each verdict. Throws ContractViolation on mismatched lengths.
AccuracyReport score(std::span<const BitVerdict> verdicts, const BurnVector& truth,
                     std::span<const double> lengths_ps);

/// Splits a simulated series into per-route attacker views.
std::vector<RouteSeries> to_route_series(const DelaySeries& series,
                                         std::span<const RouteSpec> routes);

} // namespace pentimento
