#include "pentimento/series_io.hpp"

#include "pentimento/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>
#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace pentimento {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ','))
        out.push_back(trim(field));
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

double parse_double(const std::string& text, std::size_t line, const char* column) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty() || !std::isfinite(v))
        throw DataError(fmt::format("line {}: column '{}' is not a number: '{}'", line, column, text));
    return v;
}

} // namespace

std::string format_number(double value) { return fmt::format("{}", value); }

std::vector<double> ExperimentData::lengths_ps() const {
    std::vector<double> out;
    out.reserve(routes.size());
    for (const auto& r : routes)
        out.push_back(r.length_ps);
    return out;
}

void write_experiment_csv(std::ostream& out, const DelaySeries& series,
                          std::span<const RouteSpec> routes, const BurnVector* burn) {
    if (!series.empty() && series.delta_ps.size() != routes.size())
        throw ContractViolation("write_experiment_csv: series and routes differ in length");
    if (burn && burn->size() != routes.size())
        throw ContractViolation("write_experiment_csv: burn vector and routes differ in length");
    out << (burn ? "hour,route_id,length_ps,burn_bit,delta_ps\n" : "hour,route_id,length_ps,delta_ps\n");
    for (std::size_t p = 0; p < series.hours.size(); ++p) {
        for (std::size_t i = 0; i < routes.size(); ++i) {
            out << format_number(series.hours[p]) << ',' << routes[i].id << ','
                << format_number(routes[i].nominal_delay_ps) << ',';
            if (burn)
                out << burn->bits[i] << ',';
            out << format_number(series.delta_ps[i][p]) << '\n';
        }
    }
}

ExperimentData read_experiment_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split_fields(line);
            break;
        }
    }
    if (header.empty())
        throw DataError("experiment CSV is empty");

    std::map<std::string, int> col;
    for (std::size_t i = 0; i < header.size(); ++i)
        col[header[i]] = static_cast<int>(i);
    for (const char* required : {"hour", "route_id", "length_ps", "delta_ps"})
        if (!col.count(required))
            throw DataError(fmt::format("line {}: header lacks column '{}'", line_no, required));
    const bool has_truth = col.count("burn_bit") > 0;

    ExperimentData data;
    std::map<std::string, std::size_t> index;
    std::vector<int> bits;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty())
            continue;
        const auto f = split_fields(line);
        if (f.size() != header.size())
            throw DataError(fmt::format("line {}: expected {} fields, got {}", line_no,
                                        header.size(), f.size()));
        const std::string& id = f[col["route_id"]];
        if (id.empty())
            throw DataError(fmt::format("line {}: empty route_id", line_no));
        const double hour = parse_double(f[col["hour"]], line_no, "hour");
        const double length = parse_double(f[col["length_ps"]], line_no, "length_ps");
        const double delta = parse_double(f[col["delta_ps"]], line_no, "delta_ps");
        int bit = 0;
        if (has_truth) {
            const auto& b = f[col["burn_bit"]];
            if (b != "0" && b != "1")
                throw DataError(fmt::format("line {}: burn_bit must be 0 or 1, got '{}'", line_no, b));
            bit = b == "1";
        }

        auto [it, inserted] = index.emplace(id, data.routes.size());
        if (inserted) {
            data.routes.push_back(RouteSeries{id, length, {}, {}});
            bits.push_back(bit);
        }
        auto& r = data.routes[it->second];
        if (r.length_ps != length)
            throw DataError(fmt::format("line {}: route '{}' changes length_ps", line_no, id));
        if (has_truth && bits[it->second] != bit)
            throw DataError(fmt::format("line {}: route '{}' changes burn_bit", line_no, id));
        if (!r.hours.empty() && hour <= r.hours.back())
            throw DataError(fmt::format("line {}: hours for route '{}' are not increasing", line_no, id));
        r.hours.push_back(hour);
        r.delta_ps.push_back(delta);
    }
    if (data.routes.empty())
        throw DataError("experiment CSV has a header but no rows");
    if (has_truth)
        data.truth = BurnVector{bits};
    return data;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentData read_experiment_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataError("cannot open '" + path + "'");
    try {
        return read_experiment_csv(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_verdict_csv(std::ostream& out, std::span<const BitVerdict> verdicts) {
    out << "route_id,predicted,confidence\n";
    for (const auto& v : verdicts)
        out << v.route_id << ',' << v.predicted << ',' << fmt::format("{:.6f}", v.confidence) << '\n';
}

std::string attack_summary_json(const std::string& mode, std::span<const BitVerdict> verdicts,
                                const AccuracyReport* report) {
    nlohmann::ordered_json j;
    j["mode"] = mode;
    j["routes"] = verdicts.size();
    int ones = 0;
    for (const auto& v : verdicts)
        ones += v.predicted;
    j["predicted_ones"] = ones;
    j["predicted_zeros"] = static_cast<int>(verdicts.size()) - ones;
    if (report) {
        j["accuracy"] = report->accuracy();
        j["correct"] = report->correct;
        j["confusion"] = {{"true0_pred0", report->confusion[0][0]},
                          {"true0_pred1", report->confusion[0][1]},
                          {"true1_pred0", report->confusion[1][0]},
                          {"true1_pred1", report->confusion[1][1]}};
        auto classes = nlohmann::ordered_json::array();
        for (const auto& c : report->per_class)
            classes.push_back({{"length_ps", c.length_ps},
                               {"total", c.total},
                               {"correct", c.correct},
                               {"accuracy", c.accuracy()}});
        j["per_class"] = classes;
    }
    return j.dump(2) + "\n";
}

std::string RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["config_sha256"] = config_sha256;
    j["seed"] = seed;
    j["start_hour"] = start_hour;
    j["end_hour"] = end_hour;
    j["outputs"] = outputs;
    return j.dump(2) + "\n";
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 computation failed");
    std::string hex;
    hex.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i)
        hex += fmt::format("{:02x}", digest[i]);
    return hex;
}

} // namespace pentimento
