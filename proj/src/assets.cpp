#include "pentimento/assets.hpp"

#include "pentimento/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace pentimento {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string num(double v) { return fmt::format("{:.1f}", v); }

} // namespace

const char* to_string(AssetType t) {
    switch (t) {
    case AssetType::CK: return "CK";
    case AssetType::SVT: return "SVT";
    case AssetType::S: return "S";
    }
    return "?";
}

AssetType parse_asset_type(const std::string& text) {
    if (text == "CK")
        return AssetType::CK;
    if (text == "SVT" || text == "SV/T")
        return AssetType::SVT;
    if (text == "S")
        return AssetType::S;
    throw DataError("unknown asset type '" + text + "' (expected CK, SVT or S)");
}

double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty())
        throw ContractViolation("percentile of an empty list");
    const double rank = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

AssetStats compute_stats(const AssetRecord& record) {
    const auto& v = record.route_lengths_ps;
    if (v.empty())
        throw DataError("asset '" + record.path + "' has no routes");
    std::vector<double> sorted(v);
    std::sort(sorted.begin(), sorted.end());

    AssetStats s;
    s.bus_width = v.size();
    s.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : sorted)
            ss += (x - s.mean) * (x - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
    }
    s.min = sorted.front();
    s.max = sorted.back();
    s.p25 = percentile_sorted(sorted, 0.25);
    s.p50 = percentile_sorted(sorted, 0.50);
    s.p75 = percentile_sorted(sorted, 0.75);
    return s;
}

double default_detect_threshold_ps(const Environment& env) {
    return 2.0 * measurement_noise_floor_ps(SensorConfig{}, env.noise_sigma_ps);
}

VulnerabilityReport vulnerability(const AssetRecord& record, double burn_hours,
                                  const Environment& env, std::optional<double> threshold_ps) {
    if (!(burn_hours >= 0.0) || !std::isfinite(burn_hours))
        throw ContractViolation("vulnerability: burn hours must be non-negative");
    VulnerabilityReport r;
    r.threshold_ps = threshold_ps.value_or(default_detect_threshold_ps(env));
    r.expected_abs_delta_ps.reserve(record.route_lengths_ps.size());
    for (double len : record.route_lengths_ps) {
        const double d = burn_in_magnitude(len, burn_hours, env);
        r.expected_abs_delta_ps.push_back(d);
        if (d > r.threshold_ps)
            ++r.vulnerable_bits;
    }
    if (!record.route_lengths_ps.empty())
        r.fraction = static_cast<double>(r.vulnerable_bits) /
                     static_cast<double>(record.route_lengths_ps.size());
    return r;
}

std::vector<AssetRecord> read_asset_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<AssetRecord> records;
    std::map<std::string, std::size_t> index;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        std::vector<std::string> f;
        std::istringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ','))
            f.push_back(trim(field));
        if (!header_seen) {
            header_seen = true;
            if (f != std::vector<std::string>{"asset_path", "asset_type", "length_ps"})
                throw DataError(fmt::format(
                    "line {}: header must be 'asset_path,asset_type,length_ps'", line_no));
            continue;
        }
        if (f.size() != 3)
            throw DataError(fmt::format("line {}: expected 3 fields, got {}", line_no, f.size()));
        if (f[0].empty())
            throw DataError(fmt::format("line {}: empty asset_path", line_no));
        AssetType type;
        try {
            type = parse_asset_type(f[1]);
        } catch (const DataError& e) {
            throw DataError(fmt::format("line {}: {}", line_no, e.what()));
        }
        double len = 0.0;
        const auto* end = f[2].data() + f[2].size();
        auto [ptr, ec] = std::from_chars(f[2].data(), end, len);
        if (ec != std::errc() || ptr != end || f[2].empty() || !std::isfinite(len))
            throw DataError(fmt::format("line {}: length_ps is not a number: '{}'", line_no, f[2]));
        if (len < 0.0)
            throw DataError(fmt::format("line {}: length_ps must be non-negative", line_no));

        auto [it, inserted] = index.emplace(f[0], records.size());
        if (inserted)
            records.push_back(AssetRecord{f[0], type, {}});
        auto& rec = records[it->second];
        if (rec.type != type)
            throw DataError(fmt::format("line {}: asset '{}' changes type", line_no, f[0]));
        rec.route_lengths_ps.push_back(len);
    }
    if (!header_seen)
        throw DataError("asset CSV is empty");
    if (records.empty())
        throw DataError("asset CSV has a header but no rows");
    return records;
}

std::vector<AssetRecord> read_asset_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open '" + path + "'");
    try {
        return read_asset_csv(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_stats_csv(std::ostream& out, std::span<const AssetRecord> records) {
    std::vector<std::pair<AssetStats, const AssetRecord*>> rows;
    for (const auto& r : records)
        rows.emplace_back(compute_stats(r), &r);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first.max < b.first.max; });
    out << "index,asset_path,asset_type,bus_width,mean,sd,min,p25,p50,p75,max\n";
    int i = 0;
    for (const auto& [s, r] : rows)
        out << ++i << ',' << r->path << ',' << to_string(r->type) << ',' << s.bus_width << ','
            << num(s.mean) << ',' << num(s.sd) << ',' << num(s.min) << ',' << num(s.p25) << ','
            << num(s.p50) << ',' << num(s.p75) << ',' << num(s.max) << '\n';
}

void write_vulnerability_csv(std::ostream& out, std::span<const AssetRecord> records,
                             double burn_hours, const Environment& env,
                             std::optional<double> threshold_ps) {
    out << "asset_path,asset_type,bus_width,burn_hours,threshold_ps,mean_abs_delta_ps,"
           "max_abs_delta_ps,vulnerable_bits,fraction_vulnerable\n";
    for (const auto& r : records) {
        const auto v = vulnerability(r, burn_hours, env, threshold_ps);
        const auto& d = v.expected_abs_delta_ps;
        const double mean = d.empty() ? 0.0 : std::accumulate(d.begin(), d.end(), 0.0) / d.size();
        const double mx = d.empty() ? 0.0 : *std::max_element(d.begin(), d.end());
        out << r.path << ',' << to_string(r.type) << ',' << d.size() << ','
            << fmt::format("{}", burn_hours) << ',' << fmt::format("{:.4f}", v.threshold_ps) << ','
            << fmt::format("{:.4f}", mean) << ',' << fmt::format("{:.4f}", mx) << ','
            << v.vulnerable_bits << ',' << fmt::format("{:.4f}", v.fraction) << '\n';
    }
}

} // namespace pentimento
