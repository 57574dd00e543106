#pragma once

#include "pentimento/experiment.hpp"
#include "pentimento/recovery.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace pentimento {

/// Contents of an experiment CSV (`hour,route_id,length_ps[,burn_bit],delta_ps`).
struct ExperimentData {
    std::vector<RouteSeries> routes;  // in order of first appearance
    std::optional<BurnVector> truth;  // present when the burn_bit column is

    std::vector<double> lengths_ps() const;
};

/// Writes one row per (hour, route), hour-major. `burn` may be null to omit
/// the ground-truth column.
void write_experiment_csv(std::ostream& out, const DelaySeries& series,
                          std::span<const RouteSpec> routes, const BurnVector* burn);

/// Parses an experiment CSV. Throws DataError naming the offending line.
ExperimentData read_experiment_csv(std::istream& in);
ExperimentData read_experiment_csv_file(const std::string& path);

void write_verdict_csv(std::ostream& out, std::span<const BitVerdict> verdicts);

/// JSON summary of an attack: verdict counts and, when `report` is given,
/// the accuracy breakdown.
std::string attack_summary_json(const std::string& mode, std::span<const BitVerdict> verdicts,
                                const AccuracyReport* report);

struct RunManifest {
    std::string config_sha256;
    std::uint64_t seed = 0;
    double start_hour = 0.0;
    double end_hour = 0.0;
    std::vector<std::string> outputs;

    std::string to_json() const;
};

/// Lower-case hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

/// Shortest text that parses back to the same double.
std::string format_number(double value);

/// Reads a whole file; throws DataError when it cannot be opened.
std::string read_file(const std::string& path);

} // namespace pentimento
