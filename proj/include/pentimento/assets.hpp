#pragma once

#include "pentimento/bti.hpp"
#include "pentimento/tdc.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pentimento {

enum class AssetType { CK, SVT, S };

const char* to_string(AssetType t);
/// Accepts CK, SVT, SV/T and S (case-sensitive).
AssetType parse_asset_type(const std::string& text);

struct AssetRecord {
    std::string path;
    AssetType type = AssetType::CK;
    std::vector<double> route_lengths_ps;  // one per bus bit
};

struct AssetStats {
    std::size_t bus_width = 0;
    double mean = 0.0;
    double sd = 0.0;  // sample (n - 1) standard deviation; 0 for one route
    double min = 0.0;
    double p25 = 0.0;
    double p50 = 0.0;
    double p75 = 0.0;
    double max = 0.0;
};

/// Linear-interpolation percentile (rank q * (n - 1) on the sorted values).
/// `sorted` must be ascending and non-empty.
double percentile_sorted(std::span<const double> sorted, double q);

/// Throws DataError on an empty length list.
AssetStats compute_stats(const AssetRecord& record);

struct VulnerabilityReport {
    std::vector<double> expected_abs_delta_ps;  // per bit
    double threshold_ps = 0.0;
    std::size_t vulnerable_bits = 0;
    double fraction = 0.0;
};

/// Detectability threshold used when none is given: twice the noise floor of
/// one averaged measurement with the default sensor.
double default_detect_threshold_ps(const Environment& env);

/// Evaluates the degradation model for every bit after `burn_hours` of
/// constant stress. Throws ContractViolation on negative hours.
VulnerabilityReport vulnerability(const AssetRecord& record, double burn_hours,
                                  const Environment& env,
                                  std::optional<double> threshold_ps = std::nullopt);

/// Reads `asset_path,asset_type,length_ps` rows, grouping bits by path in
/// order of first appearance. Throws DataError naming the line.
std::vector<AssetRecord> read_asset_csv(std::istream& in);
std::vector<AssetRecord> read_asset_csv_file(const std::string& path);

/// Table-style stats, sorted ascending by maximum route length.
void write_stats_csv(std::ostream& out, std::span<const AssetRecord> records);
void write_vulnerability_csv(std::ostream& out, std::span<const AssetRecord> records,
                             double burn_hours, const Environment& env,
                             std::optional<double> threshold_ps = std::nullopt);

} // namespace pentimento
