#include "pentimento/kernels.hpp"

#include "pentimento/errors.hpp"
#include "pentimento/random.hpp"

namespace pentimento {

std::uint64_t route_seed(std::uint64_t seed, std::size_t route_index) {
    return derive_seed({seed, 0x726f757465ULL, static_cast<std::uint64_t>(route_index)});
}

namespace serial {

void advance_routes(std::span<RouteState> states, std::span<const StressSegment> segments) {
    if (states.size() != segments.size())
        throw ContractViolation("advance_routes: one segment per route required");
    for (std::size_t i = 0; i < states.size(); ++i)
        states[i] = evolve(states[i], segments[i]);
}

void calibrate_routes(std::span<const RouteState> states, std::span<const Sensor> sensors,
                      std::span<const double> env_sigma_ps, std::uint64_t seed,
                      std::span<double> theta_out) {
    if (sensors.size() != states.size() || env_sigma_ps.size() != states.size() ||
        theta_out.size() != states.size())
        throw ContractViolation("calibrate_routes: span sizes differ");
    for (std::size_t i = 0; i < states.size(); ++i)
        theta_out[i] = calibrate(states[i], sensors[i], env_sigma_ps[i], route_seed(seed, i));
}

void measure_routes(std::span<const RouteState> states, std::span<const Sensor> sensors,
                    std::span<const double> theta_init, std::span<const double> env_sigma_ps,
                    std::uint64_t seed, std::span<DelayReading> out) {
    if (sensors.size() != states.size() || theta_init.size() != states.size() ||
        env_sigma_ps.size() != states.size() || out.size() != states.size())
        throw ContractViolation("measure_routes: span sizes differ");
    for (std::size_t i = 0; i < states.size(); ++i)
        out[i] = measure_route(states[i], sensors[i], theta_init[i], env_sigma_ps[i],
                               route_seed(seed, i), sensors[i].config().traces_per_measurement);
}

} // namespace serial
} // namespace pentimento
