// Serial reference vs. OpenMP kernels on the standard 64-route set.

#include "pentimento/experiment.hpp"
#include "pentimento/kernels.hpp"
#include "pentimento/random.hpp"

#include <benchmark/benchmark.h>

using namespace pentimento;

namespace {

struct Fixture {
    std::vector<RouteState> states;
    std::vector<Sensor> sensors;
    std::vector<double> sigma;
    std::vector<double> theta;

    explicit Fixture(int per_class) {
        const auto routes = standard_route_set(kStandardLengthsPs, per_class);
        for (std::size_t i = 0; i < routes.size(); ++i) {
            auto s = fresh_state(routes[i]);
            s = evolve(s, StressSegment{200.0, static_cast<int>(i % 2), Environment::lab()});
            states.push_back(s);
            sensors.emplace_back(SensorConfig{}, derive_seed({7, i}));
        }
        sigma.assign(states.size(), Environment::lab().noise_sigma_ps);
        theta.assign(states.size(), 0.0);
        serial::calibrate_routes(states, sensors, sigma, 11, theta);
    }
};

void BM_Measure(benchmark::State& st, Execution exec) {
    Fixture f(static_cast<int>(st.range(0)));
    std::vector<DelayReading> out(f.states.size());
    std::uint64_t seed = 0;
    for (auto _ : st) {
        measure_routes(f.states, f.sensors, f.theta, f.sigma, ++seed, out, exec);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(f.states.size()));
}

void BM_Calibrate(benchmark::State& st, Execution exec) {
    Fixture f(static_cast<int>(st.range(0)));
    std::vector<double> theta(f.states.size());
    std::uint64_t seed = 0;
    for (auto _ : st) {
        calibrate_routes(f.states, f.sensors, f.sigma, ++seed, theta, exec);
        benchmark::DoNotOptimize(theta.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(f.states.size()));
}

void BM_Experiment2(benchmark::State& st, Execution exec) {
    const auto routes = standard_route_set();
    const auto burn = BurnVector::random(routes.size(), 3);
    RunOptions options;
    options.execution = exec;
    for (auto _ : st) {
        auto r = run_schedule(routes, burn, Schedule::experiment2(4.0), Environment::cloud(), 5,
                              options);
        benchmark::DoNotOptimize(r.series.delta_ps.data());
    }
}

} // namespace

BENCHMARK_CAPTURE(BM_Measure, serial, Execution::Serial)->Arg(16)->Arg(64);
BENCHMARK_CAPTURE(BM_Measure, parallel, Execution::Parallel)->Arg(16)->Arg(64);
BENCHMARK_CAPTURE(BM_Calibrate, serial, Execution::Serial)->Arg(16);
BENCHMARK_CAPTURE(BM_Calibrate, parallel, Execution::Parallel)->Arg(16);
BENCHMARK_CAPTURE(BM_Experiment2, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Experiment2, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
