// Acceptance runner: prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.
#include "pentimento/experiment.hpp"
#include "pentimento/random.hpp"
#include "pentimento/recovery.hpp"
#include "pentimento/tdc.hpp"

#include "properties.hpp"

#include <fmt/format.h>

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

using namespace pentimento;

namespace {

constexpr int kSeeds = 20;
constexpr std::uint64_t kBurnSeed = 2024;

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Clock {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::size_t class_index(double length) {
    for (std::size_t c = 0; c < std::size(kStandardLengthsPs); ++c)
        if (kStandardLengthsPs[c] == length)
            return c;
    return 0;
}

// ---------------------------------------------------------------- 1

Outcome lab_anchors() {
    const std::pair<double, double> band[] = {{1, 2}, {2, 3}, {5, 6}, {10, 11}};
    const auto routes = standard_route_set();
    const auto burn = BurnVector::random(routes.size(), kBurnSeed);
    Schedule s;
    s.phases = {CalibratePhase{}, MeasurePhase{}, ConditionPhase{ValueSource::Burn, 200.0}, MeasurePhase{}};

    Clock clock;
    std::vector<double> sum(routes.size(), 0.0);
    for (int seed = 1; seed <= kSeeds; ++seed) {
        const auto r = run_schedule(routes, burn, s, Environment::lab(), seed);
        for (std::size_t i = 0; i < routes.size(); ++i)
            sum[i] += (burn.bits[i] ? 1.0 : -1.0) * r.series.delta_ps[i].back();
    }
    const double secs = clock.seconds();

    int inside = 0;
    double worst_margin = 1e9;
    for (std::size_t i = 0; i < routes.size(); ++i) {
        const double mean = sum[i] / kSeeds;
        const auto [lo, hi] = band[class_index(routes[i].nominal_delay_ps)];
        inside += mean >= lo && mean <= hi ? 1 : 0;
        worst_margin = std::min(worst_margin, std::min(mean - lo, hi - mean));
    }
    return {inside == static_cast<int>(routes.size()) && secs < 10.0,
            fmt::format("{}/{} routes inside, worst margin {:.3f} ps, {:.2f} s", inside, routes.size(),
                        worst_margin, secs)};
}

// ---------------------------------------------------------------- 2

Outcome recovery_asymmetry() {
    const auto routes = standard_route_set();
    const auto burn = BurnVector::random(routes.size(), kBurnSeed);
    Clock clock;
    const auto r = run_schedule(routes, burn, Schedule::experiment1(), Environment::lab(), 1);
    const double secs = clock.seconds();
    const auto views = to_route_series(r.series, routes);

    double worst_one = 0.0, long_lo = 1e9, long_hi = 0.0, weakest_zero = 1e9;
    bool ok = true;
    for (std::size_t i = 0; i < routes.size(); ++i) {
        const auto& v = views[i];
        const auto smooth = kernel_smooth(v.hours, v.delta_ps, 2.0);
        if (burn.bits[i]) {
            double crossing = INFINITY;
            for (std::size_t k = 0; k < v.hours.size(); ++k)
                if (v.hours[k] >= 200.0 && std::abs(smooth[k]) <= 0.5) {
                    crossing = v.hours[k] - 200.0;
                    break;
                }
            worst_one = std::max(worst_one, crossing);
            ok = ok && crossing <= 50.0;
            if (routes[i].nominal_delay_ps == 10000.0) {
                long_lo = std::min(long_lo, crossing);
                long_hi = std::max(long_hi, crossing);
                ok = ok && crossing >= 30.0;
            }
        } else {
            const double end = std::abs(smooth.back());
            weakest_zero = std::min(weakest_zero, end);
            ok = ok && end > 0.5;
        }
    }
    return {ok && secs < 10.0,
            fmt::format("burn-1 latest crossing +{} h, 10000 ps crossings +{}..+{} h, "
                        "weakest burn-0 |dps| at +200 h {:.3f} ps, {:.2f} s",
                        worst_one, long_lo, long_hi, weakest_zero, secs)};
}

// ---------------------------------------------------------------- 3 and 4

struct CloudRuns {
    std::vector<double> class_mean_sum = std::vector<double>(4, 0.0);
    std::vector<double> accuracy;
    double default_accuracy = 0.0;
};

CloudRuns cloud_runs() {
    const auto routes = standard_route_set();
    CloudRuns out;
    auto one = [&](std::uint64_t seed, const BurnVector& burn, bool record_means) {
        const auto r = run_schedule(routes, burn, Schedule::experiment2(), Environment::cloud(), seed);
        if (record_means) {
            std::vector<double> sum(4, 0.0);
            std::vector<int> n(4, 0);
            for (std::size_t i = 0; i < routes.size(); ++i) {
                const auto c = class_index(routes[i].nominal_delay_ps);
                sum[c] += std::abs(r.series.delta_ps[i].back());
                ++n[c];
            }
            for (std::size_t c = 0; c < 4; ++c)
                out.class_mean_sum[c] += sum[c] / n[c];
        }
        const auto views = to_route_series(r.series, routes);
        std::vector<double> lengths;
        for (const auto& rt : routes)
            lengths.push_back(rt.nominal_delay_ps);
        return score(classify_tm1(views), burn, lengths).accuracy();
    };
    // The bundled experiment2 config: seed 2, burn vector from the fixed burn seed.
    out.default_accuracy = one(2, BurnVector::random(routes.size(), kBurnSeed), false);
    for (int seed = 1; seed <= kSeeds; ++seed) {
        const auto burn = BurnVector::random(routes.size(), derive_seed({kBurnSeed, static_cast<std::uint64_t>(seed)}));
        out.accuracy.push_back(one(seed, burn, true));
    }
    return out;
}

Outcome cloud_attenuation(const CloudRuns& runs) {
    const double hi[] = {0.2, 0.4, 1.0, 2.0};
    bool ok = true;
    std::string detail;
    for (std::size_t c = 0; c < 4; ++c) {
        const double mean = runs.class_mean_sum[c] / kSeeds;
        ok = ok && mean > 0.0 && mean <= hi[c];
        detail += fmt::format("{}{:.0f} ps: {:.3f} in (0, {}]", c ? ", " : "", kStandardLengthsPs[c], mean, hi[c]);
    }
    return {ok, detail};
}

Outcome tm1_accuracy(const CloudRuns& runs) {
    double mean = 0.0, worst = 1.0;
    for (double a : runs.accuracy) {
        mean += a;
        worst = std::min(worst, a);
    }
    mean /= runs.accuracy.size();
    return {runs.default_accuracy == 1.0 && mean >= 0.99,
            fmt::format("default seed {:.4f}, mean over {} seeds {:.4f}, worst {:.4f}",
                        runs.default_accuracy, runs.accuracy.size(), mean, worst)};
}

// ---------------------------------------------------------------- 5

Outcome tm2_accuracy() {
    const auto routes = standard_route_set();
    std::vector<double> lengths;
    for (const auto& r : routes)
        lengths.push_back(r.nominal_delay_ps);
    int correct = 0, total = 0;
    double worst = 1.0;
    for (int seed = 1; seed <= kSeeds; ++seed) {
        const auto burn = BurnVector::random(routes.size(), derive_seed({kBurnSeed, static_cast<std::uint64_t>(seed)}));
        const auto r = run_schedule(routes, burn, Schedule::experiment3(), Environment::cloud(), seed);
        const auto verdicts = classify_tm2(to_route_series(r.series, routes));
        int c = 0, t = 0;
        for (std::size_t i = 0; i < routes.size(); ++i) {
            if (lengths[i] < 2000.0)
                continue;
            ++t;
            c += verdicts[i].predicted == burn.bits[i] ? 1 : 0;
        }
        correct += c;
        total += t;
        worst = std::min(worst, static_cast<double>(c) / t);
    }
    const double acc = static_cast<double>(correct) / total;
    return {acc >= 0.9, fmt::format("accuracy on routes >= 2000 ps over {} seeds {:.4f} ({}/{}), worst seed {:.4f}",
                                    kSeeds, acc, correct, total, worst)};
}

// ---------------------------------------------------------------- 6, 7, 8

Outcome from_properties(const std::vector<pentimento::testing::PropertyResult>& results) {
    bool ok = true;
    int cases = 0;
    std::string failing;
    for (const auto& r : results) {
        ok = ok && r.ok();
        cases += r.cases;
        if (!r.ok())
            failing += "; " + r.summary();
    }
    return {ok, fmt::format("{} properties, {} generated cases{}", results.size(), cases, failing)};
}

Outcome sensor_oracle() {
    namespace t = pentimento::testing;
    return from_properties({t::hamming_popcount_oracle(0xacc6, 1000), t::decode_round_trip(0xacc6)});
}

Outcome property_suites() {
    namespace t = pentimento::testing;
    const std::uint64_t s = 0xacc7;
    return from_properties({
        t::degradation_monotone_in_time(s),  t::degradation_monotone_in_length(s),
        t::segment_composability(s),         t::sign_convention(s),
        t::series_centering(s),              t::seed_determinism(s),
        t::stats_permutation_invariance(s),  t::percentile_ordering(s),
    });
}

Outcome worked_quartet() {
    const CaptureSnapshot quartet[] = {
        {CaptureBits::from_hex("0000007fffffffff", 64), Polarity::Rising, FrontState::Interior},
        {CaptureBits::from_hex("ffffffffffa00000", 64), Polarity::Falling, FrontState::Interior},
        {CaptureBits::from_hex("0000005fffffffff", 64), Polarity::Rising, FrontState::Interior},
        {CaptureBits::from_hex("ffffffffff900000", 64), Polarity::Falling, FrontState::Interior},
    };
    std::vector<int> got;
    for (const auto& s : quartet)
        got.push_back(hamming_distance(s));
    const std::vector<int> want{39, 22, 38, 22};
    return {got == want, fmt::format("decoded {}, {}, {}, {}", got[0], got[1], got[2], got[3])};
}

} // namespace

int main() {
    int failures = 0;
    auto report = [&](int n, const char* what, const Outcome& o) {
        failures += o.pass ? 0 : 1;
        fmt::print("{} criterion {}: {} ({})\n", o.pass ? "PASS" : "FAIL", n, what, o.detail);
        std::fflush(stdout);
    };
    report(1, "lab burn-in anchors at 200 h", lab_anchors());
    report(2, "recovery asymmetry", recovery_asymmetry());
    const auto cloud = cloud_runs();
    report(3, "cloud attenuation", cloud_attenuation(cloud));
    report(4, "threat model 1 end to end", tm1_accuracy(cloud));
    report(5, "threat model 2 end to end", tm2_accuracy());
    report(6, "sensor decode oracle", sensor_oracle());
    report(7, "property suites", property_suites());
    report(8, "worked snapshot quartet", worked_quartet());
    return failures == 0 ? 0 : 1;
}
