#pragma once

#include "pentimento/bti.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pentimento {

/// Tunable dual-polarity TDC configuration.
struct SensorConfig {
    int chain_length = 64;
    double element_tau_ps = 2.8;
    double tau_variation_sigma = 0.05;  // relative, frozen per sensor instance
    double theta_ps = 0.0;              // current phase setting (informational)
    double theta_step_ps = 2.8;
    int metastable_band = 2;
    double flip_probability = 0.25;
    /// Launch-clock jitter shared by the rising and falling capture of one launch.
    double launch_jitter_ps = 2.8;
    double theta_sweep_max_ps = 10500.0;
    double theta_sweep_min_ps = 0.0;
    int samples_per_trace = 16;
    int traces_per_measurement = 10;

    void validate() const;
    /// Phase setting `k` steps below the top of the sweep.
    double sweep_theta(long k) const;
    long sweep_steps() const;
};

/// Fixed-width bit vector holding the capture registers. Bit 0 is the chain
/// element nearest the route under test.
class CaptureBits {
public:
    CaptureBits() = default;
    explicit CaptureBits(int width);

    int width() const { return width_; }
    bool test(int i) const;
    void set(int i, bool value);
    int popcount() const;

    /// Big-endian hex, ceil(width/4) digits (bit 0 is the last digit's LSB).
    std::string to_hex() const;
    static CaptureBits from_hex(const std::string& hex, int width);

    friend bool operator==(const CaptureBits&, const CaptureBits&) = default;

private:
    int width_ = 0;
    std::vector<std::uint64_t> words_;
};

enum class FrontState { Interior, Saturated, Empty };

struct CaptureSnapshot {
    CaptureBits bits;
    Polarity polarity = Polarity::Rising;
    FrontState front = FrontState::Interior;  // ground truth, pre-metastability
};

/// Binary Hamming distance: from all-zeros for rising captures, from all-ones
/// for falling captures.
int hamming_distance(const CaptureSnapshot& snapshot);

/// One physical sensor instance: a carry chain with frozen per-element delays.
class Sensor {
public:
    /// Draws the per-element delays from `instance_seed`.
    Sensor(SensorConfig cfg, std::uint64_t instance_seed);
    /// A chain with every element exactly element_tau_ps.
    static Sensor ideal(SensorConfig cfg);

    const SensorConfig& config() const { return cfg_; }
    std::span<const double> element_delays() const { return tau_; }
    /// Time for a transition entering the chain to pass element i.
    std::span<const double> arrival_times() const { return arrival_; }

    /// Number of elements a transition passes within `budget_ps`, in [0, N].
    int front_position(double budget_ps) const;

private:
    explicit Sensor(SensorConfig cfg);

    SensorConfig cfg_;
    std::vector<double> tau_;
    std::vector<double> arrival_;
};

/// Randomness feeding one launch. The rising and falling captures of the same
/// launch share `launch_seed` and therefore the launch-clock jitter.
struct LaunchNoise {
    double env_sigma_ps = 0.0;
    std::uint64_t launch_seed = 0;
};

/// Time budget a transition has inside the chain when the capture clock fires.
double capture_budget(const RouteState& route, const Sensor& sensor, Polarity polarity,
                      double theta_ps, const LaunchNoise& noise);

/// Simulates one capture of the chain registers.
CaptureSnapshot capture(const RouteState& route, const Sensor& sensor, Polarity polarity,
                        double theta_ps, const LaunchNoise& noise);

/// Hamming distance of the snapshot `capture` would produce, without
/// materialising the bits. Metastable bubbles swap bits pairwise around the
/// front and never change the distance.
int capture_distance(const RouteState& route, const Sensor& sensor, Polarity polarity,
                     double theta_ps, const LaunchNoise& noise);

struct Trace {
    std::vector<CaptureSnapshot> snapshots;  // rising, falling, rising, ...
    double theta_ps = 0.0;
};

/// Captures `samples_per_trace` launches at one phase setting.
Trace take_trace(const RouteState& route, const Sensor& sensor, double theta_ps,
                 double env_sigma_ps, std::uint64_t trace_seed);

/// Mean Hamming distance per polarity over the launches of a trace.
struct TraceDistances {
    double rising = 0.0;
    double falling = 0.0;
    bool any_interior_rising = false;
    bool any_interior_falling = false;
    bool all_interior = true;
};

TraceDistances trace_distances(const Trace& trace, int chain_length);

/// Sweeps theta down from the top of the range until one trace shows both
/// fronts strictly inside the chain on every launch. Throws CalibrationError
/// when the sweep runs out.
double calibrate(const RouteState& route, const Sensor& sensor, double env_sigma_ps,
                 std::uint64_t seed);

struct DelayReading {
    double rise_ps = 0.0;
    double fall_ps = 0.0;

    double delta_ps() const { return fall_ps - rise_ps; }
};

/// Takes `n_traces` traces stepping theta down from theta_init and converts
/// the averaged propagation distances into delay readings. Each trace is
/// referred back to its own theta, so readings from different steps are
/// comparable. Throws MeasurementError when a trace saturates both fronts.
DelayReading measure_route(const RouteState& route, const Sensor& sensor, double theta_init,
                           double env_sigma_ps, std::uint64_t seed, int n_traces = 10);

/// Writes `trace_index, sample_index, polarity, hex_bits` lines.
void write_trace_dump(std::ostream& out, std::span<const Trace> traces);
/// Parses the format written by write_trace_dump.
std::vector<Trace> read_trace_dump(std::istream& in, int chain_length);

/// Standard deviation of one delta reading from measure_route when the
/// quantiser is fully dithered; worst case over the fractional front position.
double measurement_noise_floor_ps(const SensorConfig& cfg, double env_sigma_ps);

} // namespace pentimento
