#include "pentimento/run_config.hpp"

#include "pentimento/errors.hpp"
#include "pentimento/series_io.hpp"

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include <set>
#include <sstream>

namespace pentimento {

namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
    const auto mark = node.Mark();
    if (mark.is_null())
        throw DataError(what);
    throw DataError(fmt::format("line {}: {}", mark.line + 1, what));
}

template <class T>
T scalar(const YAML::Node& node, const std::string& key) {
    if (!node.IsScalar())
        fail(node, "'" + key + "' must be a scalar");
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail(node, "'" + key + "' has an invalid value '" + node.Scalar() + "'");
    }
}

ValueSource parse_source(const std::string& word) {
    if (word == "burn" || word == "x")
        return ValueSource::Burn;
    if (word == "complement")
        return ValueSource::Complement;
    if (word == "zero" || word == "all-zero")
        return ValueSource::AllZero;
    if (word == "one" || word == "all-one")
        return ValueSource::AllOne;
    throw DataError("unknown value source '" + word + "' (expected burn, complement, zero or one)");
}

void append_phases(const YAML::Node& list, std::vector<Phase>& out, int depth) {
    if (!list.IsSequence())
        fail(list, "'schedule' phases must be a list");
    if (depth > 8)
        fail(list, "repeat blocks nested too deeply");
    for (const auto& item : list) {
        if (item.IsScalar()) {
            try {
                out.push_back(parse_phase(item.Scalar()));
            } catch (const DataError& e) {
                fail(item, e.what());
            }
        } else if (item.IsMap()) {
            const auto repeat = item["repeat"];
            const auto body = item["phases"];
            if (!repeat || !body || item.size() != 2)
                fail(item, "a repeat block needs exactly the keys 'repeat' and 'phases'");
            const long n = scalar<long>(repeat, "repeat");
            if (n < 0 || n > 1000000)
                fail(repeat, "'repeat' must be between 0 and 1000000");
            std::vector<Phase> block;
            append_phases(body, block, depth + 1);
            for (long i = 0; i < n; ++i)
                out.insert(out.end(), block.begin(), block.end());
        } else {
            fail(item, "a phase must be a string or a repeat block");
        }
    }
}

std::uint64_t parse_seed(const YAML::Node& node, const std::string& key) {
    const auto text = scalar<std::string>(node, key);
    try {
        std::size_t used = 0;
        const auto v = std::stoull(text, &used, 0);
        if (used != text.size() || text.front() == '-')
            throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        fail(node, "'" + key + "' must be a non-negative integer, got '" + text + "'");
    }
}

} // namespace

Phase parse_phase(const std::string& text) {
    std::istringstream ss(text);
    std::string verb;
    ss >> verb;
    if (verb == "calibrate" || verb == "measure") {
        std::string extra;
        if (ss >> extra)
            throw DataError("phase '" + text + "' takes no arguments");
        if (verb == "calibrate")
            return CalibratePhase{};
        return MeasurePhase{};
    }
    if (verb == "condition") {
        std::string source, hours_text, extra;
        if (!(ss >> source >> hours_text) || (ss >> extra))
            throw DataError("phase '" + text + "' must read 'condition <source> <hours>'");
        double hours = 0.0;
        try {
            std::size_t used = 0;
            hours = std::stod(hours_text, &used);
            if (used != hours_text.size())
                throw std::invalid_argument(hours_text);
        } catch (const std::exception&) {
            throw DataError("phase '" + text + "': hours must be a number");
        }
        return ConditionPhase{parse_source(source), hours};
    }
    throw DataError("unknown phase '" + text + "' (expected calibrate, measure or condition)");
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw DataError(fmt::format("{}: line {}: {}", origin, e.mark.line + 1, e.msg));
    }
    if (!root.IsMap())
        throw DataError(origin + ": config must be a mapping of keys to values");

    static const std::set<std::string> known = {
        "routes", "lengths_ps", "burn_seed", "burn_bits", "schedule", "theta_source",
        "regime", "seed", "hours_per_step", "environment"};

    RunConfig cfg;
    try {
        for (const auto& kv : root) {
            const auto key = kv.first.as<std::string>();
            if (!known.count(key))
                fail(kv.first, "unknown key '" + key + "'");
        }
        if (const auto n = root["routes"]) {
            cfg.routes_per_class = scalar<int>(n, "routes");
            if (cfg.routes_per_class < 1)
                fail(n, "'routes' must be at least 1");
        }
        if (const auto n = root["lengths_ps"]) {
            if (!n.IsSequence() || n.size() == 0)
                fail(n, "'lengths_ps' must be a non-empty list");
            cfg.lengths_ps.clear();
            for (const auto& v : n) {
                const double len = scalar<double>(v, "lengths_ps");
                if (!(len > 0.0))
                    fail(v, "route lengths must be positive");
                cfg.lengths_ps.push_back(len);
            }
        }
        if (const auto n = root["burn_seed"])
            cfg.burn_seed = parse_seed(n, "burn_seed");
        if (const auto n = root["burn_bits"]) {
            if (cfg.burn_seed)
                fail(n, "give either 'burn_seed' or 'burn_bits', not both");
            std::vector<int> bits;
            if (n.IsScalar()) {
                for (char c : n.Scalar()) {
                    if (c != '0' && c != '1')
                        fail(n, "'burn_bits' string may only hold 0 and 1");
                    bits.push_back(c == '1');
                }
            } else if (n.IsSequence()) {
                for (const auto& v : n) {
                    const int b = scalar<int>(v, "burn_bits");
                    if (b != 0 && b != 1)
                        fail(v, "burn bits must be 0 or 1");
                    bits.push_back(b);
                }
            } else {
                fail(n, "'burn_bits' must be a list or a 0/1 string");
            }
            cfg.burn_bits = std::move(bits);
        }
        if (const auto n = root["hours_per_step"]) {
            cfg.hours_per_step = scalar<double>(n, "hours_per_step");
            if (!(cfg.hours_per_step > 0.0))
                fail(n, "'hours_per_step' must be positive");
        }
        const auto sched = root["schedule"];
        if (!sched)
            throw DataError("missing required key 'schedule'");
        if (sched.IsScalar()) {
            cfg.schedule_name = sched.Scalar();
            try {
                const auto s = Schedule::named(cfg.schedule_name);
                cfg.theta_source = s.theta_source;
            } catch (const DataError& e) {
                fail(sched, e.what());
            }
        } else {
            append_phases(sched, cfg.phases, 0);
        }
        if (const auto n = root["theta_source"]) {
            const auto v = scalar<std::string>(n, "theta_source");
            if (v == "calibration")
                cfg.theta_source = ThetaSource::Calibration;
            else if (v == "fleet_table")
                cfg.theta_source = ThetaSource::FleetTable;
            else
                fail(n, "'theta_source' must be 'calibration' or 'fleet_table'");
            if (!cfg.schedule_name.empty() &&
                cfg.theta_source != Schedule::named(cfg.schedule_name).theta_source)
                fail(n, "'theta_source' conflicts with the named schedule");
        }
        if (const auto n = root["regime"]) {
            try {
                cfg.regime = parse_regime(scalar<std::string>(n, "regime"));
            } catch (const std::exception& e) {
                fail(n, e.what());
            }
        }
        if (const auto n = root["seed"])
            cfg.seed = parse_seed(n, "seed");
        if (const auto env = root["environment"]) {
            if (!env.IsMap())
                fail(env, "'environment' must be a mapping");
            for (const auto& kv : env) {
                const auto key = kv.first.as<std::string>();
                if (key == "temperature_c")
                    cfg.temperature_c = scalar<double>(kv.second, key);
                else if (key == "device_age_factor")
                    cfg.device_age_factor = scalar<double>(kv.second, key);
                else if (key == "noise_sigma_ps")
                    cfg.noise_sigma_ps = scalar<double>(kv.second, key);
                else
                    fail(kv.first, "unknown environment key '" + key + "'");
            }
        }
        if (cfg.burn_bits &&
            cfg.burn_bits->size() != cfg.lengths_ps.size() * static_cast<std::size_t>(cfg.routes_per_class))
            fail(root["burn_bits"],
                 fmt::format("'burn_bits' has {} bits but the config defines {} routes",
                             cfg.burn_bits->size(),
                             cfg.lengths_ps.size() * static_cast<std::size_t>(cfg.routes_per_class)));
        cfg.schedule().validate();
        cfg.environment().validate();
    } catch (const DataError& e) {
        throw DataError(origin + ": " + e.what());
    } catch (const ContractViolation& e) {
        throw DataError(origin + ": " + e.what());
    } catch (const YAML::Exception& e) {
        throw DataError(fmt::format("{}: line {}: {}", origin, e.mark.line + 1, e.msg));
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) { return parse_run_config(read_file(path), path); }

std::vector<RouteSpec> RunConfig::routes() const { return standard_route_set(lengths_ps, routes_per_class); }

Schedule RunConfig::schedule() const {
    if (!schedule_name.empty())
        return Schedule::named(schedule_name, hours_per_step);
    Schedule s;
    s.phases = phases;
    s.theta_source = theta_source;
    return s;
}

Environment RunConfig::environment() const {
    Environment env = regime == Regime::Lab ? Environment::lab() : Environment::cloud();
    if (temperature_c)
        env.temperature_c = *temperature_c;
    if (device_age_factor)
        env.device_age_factor = *device_age_factor;
    if (noise_sigma_ps)
        env.noise_sigma_ps = *noise_sigma_ps;
    return env;
}

BurnVector RunConfig::burn(std::uint64_t run_seed) const {
    if (burn_bits)
        return BurnVector{*burn_bits};
    const std::size_t n = lengths_ps.size() * static_cast<std::size_t>(routes_per_class);
    return BurnVector::random(n, burn_seed.value_or(run_seed));
}

} // namespace pentimento
