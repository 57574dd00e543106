#include "pentimento/recovery.hpp"

#include "pentimento/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace pentimento {

namespace {

double median(std::vector<double> v) {
    if (v.empty())
        return 0.0;
    const auto mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        const double lower = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
        m = 0.5 * (m + lower);
    }
    return m;
}

// Route indices grouped by nominal length.
std::map<double, std::vector<std::size_t>> length_classes(std::span<const RouteSeries> routes) {
    std::map<double, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < routes.size(); ++i)
        classes[routes[i].length_ps].push_back(i);
    return classes;
}

double end_minus_start(std::span<const double> hours, std::span<const double> values,
                       double bandwidth) {
    const auto smooth = kernel_smooth(hours, values, bandwidth);
    return smooth.back() - smooth.front();
}

} // namespace

std::vector<double> kernel_smooth(std::span<const double> hours, std::span<const double> values,
                                  double bandwidth_hours) {
    if (hours.size() != values.size())
        throw ContractViolation("kernel_smooth: hours and values differ in length");
    if (hours.size() < 2)
        throw InsufficientDataError("kernel_smooth needs at least 2 points, got " +
                                    std::to_string(hours.size()));
    if (!(bandwidth_hours > 0.0) || !std::isfinite(bandwidth_hours))
        throw ContractViolation("kernel_smooth: bandwidth must be positive");

    const std::size_t n = hours.size();
    std::vector<double> out(n);
    const double inv2h2 = 0.5 / (bandwidth_hours * bandwidth_hours);
    for (std::size_t j = 0; j < n; ++j) {
        const double x0 = hours[j];
        // Weighted least squares on centred x: minimise sum w (y - a - b (x - x0))^2.
        double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = hours[i] - x0;
            const double w = std::exp(-dx * dx * inv2h2);
            s0 += w;
            s1 += w * dx;
            s2 += w * dx * dx;
            t0 += w * values[i];
            t1 += w * dx * values[i];
        }
        const double det = s0 * s2 - s1 * s1;
        if (det > 1e-12 * s0 * s2 && s2 > 0.0)
            out[j] = (s2 * t0 - s1 * t1) / det;
        else
            out[j] = t0 / s0;
    }
    return out;
}

std::vector<BitVerdict> classify_tm1(std::span<const RouteSeries> routes, const Tm1Options& options) {
    std::vector<double> diff(routes.size());
    std::vector<BitVerdict> verdicts(routes.size());
    for (std::size_t i = 0; i < routes.size(); ++i) {
        const auto& r = routes[i];
        if (static_cast<int>(r.hours.size()) < options.min_points)
            throw InsufficientDataError("route '" + r.route_id + "': TM1 needs at least " +
                                        std::to_string(options.min_points) + " points, got " +
                                        std::to_string(r.hours.size()));
        diff[i] = end_minus_start(r.hours, r.delta_ps, options.bandwidth_hours);
        verdicts[i].route_id = r.route_id;
        verdicts[i].predicted = diff[i] > 0.0 ? 1 : 0;
    }

    for (const auto& [length, members] : length_classes(routes)) {
        for (int bit = 0; bit < 2; ++bit) {
            std::vector<double> mags;
            for (auto i : members)
                if (verdicts[i].predicted == bit)
                    mags.push_back(std::abs(diff[i]));
            const double scale = median(mags);
            for (auto i : members) {
                if (verdicts[i].predicted != bit)
                    continue;
                verdicts[i].confidence =
                    scale > 0.0 ? std::min(1.0, std::abs(diff[i]) / scale) : 0.0;
            }
        }
    }
    return verdicts;
}

double window_trend(const RouteSeries& route, const Tm2Options& options) {
    std::vector<double> h, v;
    const double end = options.acquired_at_hours + options.window_hours;
    for (std::size_t i = 0; i < route.hours.size(); ++i) {
        if (route.hours[i] >= options.acquired_at_hours && route.hours[i] < end) {
            h.push_back(route.hours[i]);
            v.push_back(route.delta_ps[i]);
        }
    }
    if (static_cast<int>(h.size()) < options.min_points)
        throw InsufficientDataError(fmt::format(
            "route '{}': recovery window [{}, {}) h holds {} points, need {}", route.route_id,
            options.acquired_at_hours, end, h.size(), options.min_points));
    return end_minus_start(h, v, options.bandwidth_hours);
}

double two_means_cut(std::span<const double> values) {
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    if (v.empty() || v.front() == v.back())
        return std::numeric_limits<double>::quiet_NaN();
    const std::size_t n = v.size();
    std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + v[i];
        prefix_sq[i + 1] = prefix_sq[i] + v[i] * v[i];
    }
    auto sse = [&](std::size_t a, std::size_t b) {
        const double m = static_cast<double>(b - a);
        const double s = prefix[b] - prefix[a];
        return (prefix_sq[b] - prefix_sq[a]) - s * s / m;
    };
    double best = std::numeric_limits<double>::infinity();
    double cut = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t k = 1; k < n; ++k) {
        if (v[k] == v[k - 1])
            continue;
        const double cost = sse(0, k) + sse(k, n);
        if (cost < best) {
            best = cost;
            cut = 0.5 * (v[k - 1] + v[k]);
        }
    }
    return cut;
}

std::vector<BitVerdict> classify_tm2(std::span<const RouteSeries> routes, const Tm2Options& options) {
    std::vector<double> trend(routes.size());
    for (std::size_t i = 0; i < routes.size(); ++i)
        trend[i] = window_trend(routes[i], options);

    std::vector<BitVerdict> verdicts(routes.size());
    for (const auto& [length, members] : length_classes(routes)) {
        std::vector<double> t;
        for (auto i : members)
            t.push_back(trend[i]);
        const double cut = two_means_cut(t);
        double low = 0.0, high = 0.0;
        int n_low = 0, n_high = 0;
        if (!std::isnan(cut)) {
            for (double x : t) {
                if (x < cut) {
                    low += x;
                    ++n_low;
                } else {
                    high += x;
                    ++n_high;
                }
            }
        }
        const double half_gap = n_low && n_high ? 0.5 * (high / n_high - low / n_low) : 0.0;
        for (auto i : members) {
            auto& v = verdicts[i];
            v.route_id = routes[i].route_id;
            if (std::isnan(cut))
                continue;
            v.predicted = trend[i] < cut ? 1 : 0;
            v.confidence = half_gap > 0.0 ? std::min(1.0, std::abs(trend[i] - cut) / half_gap) : 0.0;
        }
    }
    return verdicts;
}

AccuracyReport score(std::span<const BitVerdict> verdicts, const BurnVector& truth,
                     std::span<const double> lengths_ps) {
    if (verdicts.size() != truth.size() || lengths_ps.size() != truth.size())
        throw ContractViolation("score: verdicts, truth and lengths must align");
    AccuracyReport report;
    std::map<double, ClassAccuracy> classes;
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
        const int t = truth.bits[i];
        const int p = verdicts[i].predicted;
        auto& c = classes[lengths_ps[i]];
        c.length_ps = lengths_ps[i];
        ++c.total;
        ++report.total;
        ++report.confusion[t][p];
        if (t == p) {
            ++c.correct;
            ++report.correct;
        }
    }
    for (auto& [length, c] : classes)
        report.per_class.push_back(c);
    return report;
}

std::vector<RouteSeries> to_route_series(const DelaySeries& series,
                                         std::span<const RouteSpec> routes) {
    if (!series.empty() && series.delta_ps.size() != routes.size())
        throw ContractViolation("to_route_series: series and routes differ in length");
    std::vector<RouteSeries> out(routes.size());
    for (std::size_t i = 0; i < routes.size(); ++i) {
        out[i].route_id = routes[i].id;
        out[i].length_ps = routes[i].nominal_delay_ps;
        out[i].hours = series.hours;
        if (!series.empty())
            out[i].delta_ps = series.delta_ps[i];
    }
    return out;
}

} // namespace pentimento
