#include "pentimento/tdc.hpp"

#include "pentimento/errors.hpp"
#include "pentimento/random.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace pentimento {

namespace {

constexpr double kFrontEpsilonPs = 1e-9;

std::uint64_t polarity_stream(std::uint64_t launch_seed, Polarity p) {
    return derive_seed({launch_seed, p == Polarity::Rising ? 0x52ULL : 0x46ULL});
}

double normal(SplitMix64& rng, double sigma) {
    if (sigma <= 0.0)
        return 0.0;
    std::normal_distribution<double> dist(0.0, sigma);
    return dist(rng);
}

bool interior(int hd, int n) { return hd > 0 && hd < n; }

} // namespace

// ---------------------------------------------------------------- config

void SensorConfig::validate() const {
    if (chain_length < 1)
        throw ContractViolation("chain_length must be at least 1");
    if (!(element_tau_ps > 0.0))
        throw ContractViolation("element_tau_ps must be positive");
    if (!(tau_variation_sigma >= 0.0))
        throw ContractViolation("tau_variation_sigma must be nonnegative");
    if (!(theta_step_ps > 0.0))
        throw ContractViolation("theta_step_ps must be positive");
    if (metastable_band < 0)
        throw ContractViolation("metastable_band must be nonnegative");
    if (!(flip_probability >= 0.0 && flip_probability <= 1.0))
        throw ContractViolation("flip_probability must lie in [0, 1]");
    if (!(launch_jitter_ps >= 0.0))
        throw ContractViolation("launch_jitter_ps must be nonnegative");
    if (!(theta_sweep_max_ps >= theta_sweep_min_ps))
        throw ContractViolation("theta sweep bounds are inverted");
    if (samples_per_trace < 1 || traces_per_measurement < 1)
        throw ContractViolation("trace sizes must be positive");
}

double SensorConfig::sweep_theta(long k) const {
    const double top = std::floor(theta_sweep_max_ps / theta_step_ps + 1e-9) * theta_step_ps;
    return top - static_cast<double>(k) * theta_step_ps;
}

long SensorConfig::sweep_steps() const {
    const double top = sweep_theta(0);
    if (top < theta_sweep_min_ps)
        return 0;
    return static_cast<long>(std::floor((top - theta_sweep_min_ps) / theta_step_ps + 1e-9)) + 1;
}

// ---------------------------------------------------------------- bits

CaptureBits::CaptureBits(int width)
    : width_(width), words_(static_cast<std::size_t>((width + 63) / 64), 0ULL) {
    if (width < 0)
        throw ContractViolation("negative bit width");
}

bool CaptureBits::test(int i) const {
    return (words_[static_cast<std::size_t>(i / 64)] >> (i % 64)) & 1ULL;
}

void CaptureBits::set(int i, bool value) {
    auto& w = words_[static_cast<std::size_t>(i / 64)];
    const auto mask = 1ULL << (i % 64);
    w = value ? (w | mask) : (w & ~mask);
}

int CaptureBits::popcount() const {
    int total = 0;
    for (auto w : words_)
        total += std::popcount(w);
    return total;
}

std::string CaptureBits::to_hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    const int nibbles = (width_ + 3) / 4;
    std::string out;
    out.reserve(static_cast<std::size_t>(nibbles));
    for (int j = nibbles - 1; j >= 0; --j) {
        int v = 0;
        for (int b = 3; b >= 0; --b) {
            const int i = 4 * j + b;
            v = (v << 1) | ((i < width_ && test(i)) ? 1 : 0);
        }
        out.push_back(digits[v]);
    }
    return out;
}

CaptureBits CaptureBits::from_hex(const std::string& hex, int width) {
    CaptureBits bits(width);
    const int nibbles = static_cast<int>(hex.size());
    for (int k = 0; k < nibbles; ++k) {
        const char c = hex[static_cast<std::size_t>(k)];
        int v;
        if (c >= '0' && c <= '9')
            v = c - '0';
        else if (c >= 'a' && c <= 'f')
            v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            v = c - 'A' + 10;
        else
            throw DataError(std::string("invalid hex digit '") + c + "'");
        const int j = nibbles - 1 - k;
        for (int b = 0; b < 4; ++b) {
            if (!((v >> b) & 1))
                continue;
            const int i = 4 * j + b;
            if (i >= width)
                throw DataError("hex word '" + hex + "' wider than the chain");
            bits.set(i, true);
        }
    }
    return bits;
}

int hamming_distance(const CaptureSnapshot& snapshot) {
    const int ones = snapshot.bits.popcount();
    return snapshot.polarity == Polarity::Rising ? ones : snapshot.bits.width() - ones;
}

// ---------------------------------------------------------------- sensor

Sensor::Sensor(SensorConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

Sensor::Sensor(SensorConfig cfg, std::uint64_t instance_seed) : Sensor(std::move(cfg)) {
    const auto n = static_cast<std::size_t>(cfg_.chain_length);
    tau_.resize(n);
    arrival_.resize(n);
    SplitMix64 rng(derive_seed({instance_seed, 0x7a75ULL}));
    std::normal_distribution<double> z(0.0, 1.0);
    double t = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dz = std::clamp(z(rng), -3.0, 3.0);
        tau_[i] = cfg_.element_tau_ps * (1.0 + cfg_.tau_variation_sigma * dz);
        t += tau_[i];
        arrival_[i] = t;
    }
}

Sensor Sensor::ideal(SensorConfig cfg) {
    Sensor s(std::move(cfg));
    const auto n = static_cast<std::size_t>(s.cfg_.chain_length);
    s.tau_.assign(n, s.cfg_.element_tau_ps);
    s.arrival_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        s.arrival_[i] = static_cast<double>(i + 1) * s.cfg_.element_tau_ps;
    return s;
}

int Sensor::front_position(double budget_ps) const {
    const auto it = std::upper_bound(arrival_.begin(), arrival_.end(), budget_ps + kFrontEpsilonPs);
    return static_cast<int>(it - arrival_.begin());
}

// ---------------------------------------------------------------- capture

double capture_budget(const RouteState& route, const Sensor& sensor, Polarity polarity,
                      double theta_ps, const LaunchNoise& noise) {
    SplitMix64 launch_rng(noise.launch_seed);
    SplitMix64 own_rng(polarity_stream(noise.launch_seed, polarity));
    const double jitter = normal(launch_rng, sensor.config().launch_jitter_ps);
    return theta_ps - true_delay(route, polarity) + jitter + normal(own_rng, noise.env_sigma_ps);
}

int capture_distance(const RouteState& route, const Sensor& sensor, Polarity polarity,
                     double theta_ps, const LaunchNoise& noise) {
    return sensor.front_position(capture_budget(route, sensor, polarity, theta_ps, noise));
}

CaptureSnapshot capture(const RouteState& route, const Sensor& sensor, Polarity polarity,
                        double theta_ps, const LaunchNoise& noise) {
    const auto& cfg = sensor.config();
    const int n = cfg.chain_length;

    SplitMix64 launch_rng(noise.launch_seed);
    SplitMix64 own_rng(polarity_stream(noise.launch_seed, polarity));
    const double jitter = normal(launch_rng, cfg.launch_jitter_ps);
    const double budget =
        theta_ps - true_delay(route, polarity) + jitter + normal(own_rng, noise.env_sigma_ps);
    const int front = sensor.front_position(budget);

    const bool propagated = polarity == Polarity::Rising;
    CaptureSnapshot snap{CaptureBits(n), polarity, FrontState::Interior};
    if (front == 0)
        snap.front = FrontState::Empty;
    else if (front == n)
        snap.front = FrontState::Saturated;
    for (int i = 0; i < n; ++i)
        snap.bits.set(i, (i < front) == propagated);

    // Metastable registers around the front resolve as bubbles: a settled bit
    // just behind the front trades places with an unsettled one just ahead.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 1; k <= cfg.metastable_band; ++k) {
        const bool flip = u(own_rng) < cfg.flip_probability;
        const int behind = front - k;
        const int ahead = front + k - 1;
        if (flip && behind >= 0 && ahead < n) {
            snap.bits.set(behind, !propagated);
            snap.bits.set(ahead, propagated);
        }
    }
    return snap;
}

Trace take_trace(const RouteState& route, const Sensor& sensor, double theta_ps,
                 double env_sigma_ps, std::uint64_t trace_seed) {
    const int samples = sensor.config().samples_per_trace;
    Trace trace;
    trace.theta_ps = theta_ps;
    trace.snapshots.reserve(static_cast<std::size_t>(2 * samples));
    for (int s = 0; s < samples; ++s) {
        const LaunchNoise noise{env_sigma_ps, derive_seed({trace_seed, static_cast<std::uint64_t>(s)})};
        trace.snapshots.push_back(capture(route, sensor, Polarity::Rising, theta_ps, noise));
        trace.snapshots.push_back(capture(route, sensor, Polarity::Falling, theta_ps, noise));
    }
    return trace;
}

TraceDistances trace_distances(const Trace& trace, int chain_length) {
    TraceDistances d;
    int n_rise = 0;
    int n_fall = 0;
    for (const auto& snap : trace.snapshots) {
        const int hd = hamming_distance(snap);
        const bool in = interior(hd, chain_length);
        d.all_interior = d.all_interior && in;
        if (snap.polarity == Polarity::Rising) {
            d.rising += hd;
            d.any_interior_rising = d.any_interior_rising || in;
            ++n_rise;
        } else {
            d.falling += hd;
            d.any_interior_falling = d.any_interior_falling || in;
            ++n_fall;
        }
    }
    if (n_rise > 0)
        d.rising /= n_rise;
    if (n_fall > 0)
        d.falling /= n_fall;
    return d;
}

// ---------------------------------------------------------------- procedures

double calibrate(const RouteState& route, const Sensor& sensor, double env_sigma_ps,
                 std::uint64_t seed) {
    const auto& cfg = sensor.config();
    const int n = cfg.chain_length;
    const long steps = cfg.sweep_steps();
    for (long k = 0; k < steps; ++k) {
        const double theta = cfg.sweep_theta(k);
        bool ok = true;
        for (int s = 0; s < cfg.samples_per_trace && ok; ++s) {
            const LaunchNoise noise{env_sigma_ps,
                                    derive_seed({seed, static_cast<std::uint64_t>(k),
                                                 static_cast<std::uint64_t>(s)})};
            ok = interior(capture_distance(route, sensor, Polarity::Rising, theta, noise), n) &&
                 interior(capture_distance(route, sensor, Polarity::Falling, theta, noise), n);
        }
        if (ok)
            return theta;
    }
    std::ostringstream msg;
    msg << "theta sweep [" << cfg.theta_sweep_min_ps << ", " << cfg.theta_sweep_max_ps
        << "] ps never placed both transitions inside the chain (route delay "
        << route.spec.nominal_delay_ps << " ps)";
    throw CalibrationError(route.spec.id, msg.str());
}

DelayReading measure_route(const RouteState& route, const Sensor& sensor, double theta_init,
                           double env_sigma_ps, std::uint64_t seed, int n_traces) {
    if (n_traces < 1)
        throw ContractViolation("measure_route needs at least one trace");
    const auto& cfg = sensor.config();
    const int n = cfg.chain_length;
    const double tau = cfg.element_tau_ps;

    double rise = 0.0;
    double fall = 0.0;
    for (int t = 0; t < n_traces; ++t) {
        const double theta = theta_init - t * cfg.theta_step_ps;
        long sum_r = 0;
        long sum_f = 0;
        bool live_r = false;
        bool live_f = false;
        for (int s = 0; s < cfg.samples_per_trace; ++s) {
            const LaunchNoise noise{env_sigma_ps,
                                    derive_seed({seed, static_cast<std::uint64_t>(t),
                                                 static_cast<std::uint64_t>(s)})};
            const int hr = capture_distance(route, sensor, Polarity::Rising, theta, noise);
            const int hf = capture_distance(route, sensor, Polarity::Falling, theta, noise);
            sum_r += hr;
            sum_f += hf;
            live_r = live_r || interior(hr, n);
            live_f = live_f || interior(hf, n);
        }
        if (!live_r && !live_f) {
            std::ostringstream msg;
            msg << "trace " << t << " at theta " << theta << " ps saturated both fronts";
            throw MeasurementError(route.spec.id, msg.str());
        }
        const double mean_r = static_cast<double>(sum_r) / cfg.samples_per_trace;
        const double mean_f = static_cast<double>(sum_f) / cfg.samples_per_trace;
        // Half an element recentres the floor() of the front quantiser.
        rise += theta - tau * (mean_r + 0.5);
        fall += theta - tau * (mean_f + 0.5);
    }
    return DelayReading{rise / n_traces, fall / n_traces};
}

// ---------------------------------------------------------------- dump format

void write_trace_dump(std::ostream& out, std::span<const Trace> traces) {
    for (std::size_t t = 0; t < traces.size(); ++t) {
        const auto& snaps = traces[t].snapshots;
        for (std::size_t i = 0; i < snaps.size(); ++i) {
            out << t << ", " << i / 2 << ", " << to_string(snaps[i].polarity) << ", "
                << snaps[i].bits.to_hex() << '\n';
        }
    }
}

std::vector<Trace> read_trace_dump(std::istream& in, int chain_length) {
    std::vector<Trace> traces;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            const auto b = field.find_first_not_of(" \t\r");
            const auto e = field.find_last_not_of(" \t\r");
            fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
        }
        if (fields.size() != 4)
            throw DataError("trace dump line " + std::to_string(line_no) + ": expected 4 fields");
        std::size_t trace_index;
        try {
            trace_index = std::stoul(fields[0]);
            (void)std::stoul(fields[1]);
        } catch (const std::exception&) {
            throw DataError("trace dump line " + std::to_string(line_no) + ": bad index");
        }
        Polarity pol;
        if (fields[2] == "rising")
            pol = Polarity::Rising;
        else if (fields[2] == "falling")
            pol = Polarity::Falling;
        else
            throw DataError("trace dump line " + std::to_string(line_no) + ": bad polarity");
        if (trace_index >= traces.size())
            traces.resize(trace_index + 1);
        CaptureSnapshot snap{CaptureBits::from_hex(fields[3], chain_length), pol,
                             FrontState::Interior};
        const int hd = hamming_distance(snap);
        if (hd == 0)
            snap.front = FrontState::Empty;
        else if (hd == chain_length)
            snap.front = FrontState::Saturated;
        traces[trace_index].snapshots.push_back(std::move(snap));
    }
    return traces;
}

double measurement_noise_floor_ps(const SensorConfig& cfg, double env_sigma_ps) {
    const double tau = cfg.element_tau_ps;
    const double per_pair = std::sqrt(0.25 * tau * tau + 2.0 * env_sigma_ps * env_sigma_ps);
    return per_pair / std::sqrt(static_cast<double>(cfg.samples_per_trace) *
                                cfg.traces_per_measurement);
}

} // namespace pentimento
