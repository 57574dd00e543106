#pragma once

#include "pentimento/bti.hpp"
#include "pentimento/tdc.hpp"

#include <cstdint>
#include <span>

namespace pentimento {

// Per-route batch kernels. Every route is independent and every random draw is
// keyed by (seed, route index, ...), so the OpenMP kernels must reproduce the
// serial reference bit for bit. The serial versions are kept as the oracle for
// tests and as the baseline for the benchmark.

enum class Execution { Serial, Parallel };

/// Per-route key mixed into `seed` for calibration and measurement draws.
std::uint64_t route_seed(std::uint64_t seed, std::size_t route_index);

namespace serial {

void advance_routes(std::span<RouteState> states, std::span<const StressSegment> segments);

void calibrate_routes(std::span<const RouteState> states, std::span<const Sensor> sensors,
                      std::span<const double> env_sigma_ps, std::uint64_t seed,
                      std::span<double> theta_out);

void measure_routes(std::span<const RouteState> states, std::span<const Sensor> sensors,
                    std::span<const double> theta_init, std::span<const double> env_sigma_ps,
                    std::uint64_t seed, std::span<DelayReading> out);

} // namespace serial

namespace parallel {

void advance_routes(std::span<RouteState> states, std::span<const StressSegment> segments);

void calibrate_routes(std::span<const RouteState> states, std::span<const Sensor> sensors,
                      std::span<const double> env_sigma_ps, std::uint64_t seed,
                      std::span<double> theta_out);

void measure_routes(std::span<const RouteState> states, std::span<const Sensor> sensors,
                    std::span<const double> theta_init, std::span<const double> env_sigma_ps,
                    std::uint64_t seed, std::span<DelayReading> out);

} // namespace parallel

inline void advance_routes(std::span<RouteState> states, std::span<const StressSegment> segments,
                           Execution exec) {
    exec == Execution::Serial ? serial::advance_routes(states, segments)
                              : parallel::advance_routes(states, segments);
}

inline void calibrate_routes(std::span<const RouteState> states, std::span<const Sensor> sensors,
                             std::span<const double> env_sigma_ps, std::uint64_t seed,
                             std::span<double> theta_out, Execution exec) {
    exec == Execution::Serial
        ? serial::calibrate_routes(states, sensors, env_sigma_ps, seed, theta_out)
        : parallel::calibrate_routes(states, sensors, env_sigma_ps, seed, theta_out);
}

inline void measure_routes(std::span<const RouteState> states, std::span<const Sensor> sensors,
                           std::span<const double> theta_init, std::span<const double> env_sigma_ps,
                           std::uint64_t seed, std::span<DelayReading> out, Execution exec) {
    exec == Execution::Serial
        ? serial::measure_routes(states, sensors, theta_init, env_sigma_ps, seed, out)
        : parallel::measure_routes(states, sensors, theta_init, env_sigma_ps, seed, out);
}

} // namespace pentimento
