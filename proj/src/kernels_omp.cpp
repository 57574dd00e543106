#include "pentimento/kernels.hpp"

#include "pentimento/errors.hpp"

#include <exception>
#include <vector>

namespace pentimento::parallel {

namespace {

// Exceptions cannot cross an OpenMP region. Each iteration parks its failure
// and the lowest-index one is rethrown, matching what the serial loop reports.
template <class Body>
void for_each_route(std::size_t n, Body body) {
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace

void advance_routes(std::span<RouteState> states, std::span<const StressSegment> segments) {
    if (states.size() != segments.size())
        throw ContractViolation("advance_routes: one segment per route required");
    for_each_route(states.size(), [&](std::size_t i) { states[i] = evolve(states[i], segments[i]); });
}

void calibrate_routes(std::span<const RouteState> states, std::span<const Sensor> sensors,
                      std::span<const double> env_sigma_ps, std::uint64_t seed,
                      std::span<double> theta_out) {
    if (sensors.size() != states.size() || env_sigma_ps.size() != states.size() ||
        theta_out.size() != states.size())
        throw ContractViolation("calibrate_routes: span sizes differ");
    for_each_route(states.size(), [&](std::size_t i) {
        theta_out[i] = calibrate(states[i], sensors[i], env_sigma_ps[i], route_seed(seed, i));
    });
}

void measure_routes(std::span<const RouteState> states, std::span<const Sensor> sensors,
                    std::span<const double> theta_init, std::span<const double> env_sigma_ps,
                    std::uint64_t seed, std::span<DelayReading> out) {
    if (sensors.size() != states.size() || theta_init.size() != states.size() ||
        env_sigma_ps.size() != states.size() || out.size() != states.size())
        throw ContractViolation("measure_routes: span sizes differ");
    for_each_route(states.size(), [&](std::size_t i) {
        out[i] = measure_route(states[i], sensors[i], theta_init[i], env_sigma_ps[i],
                               route_seed(seed, i), sensors[i].config().traces_per_measurement);
    });
}

} // namespace pentimento::parallel
