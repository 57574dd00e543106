#include "pentimento/errors.hpp"
#include "pentimento/run_config.hpp"
#include "pentimento/series_io.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sstream>

using namespace pentimento;

namespace {

ExperimentData parse_csv(const std::string& text) {
    std::istringstream in(text);
    return read_experiment_csv(in);
}

std::string error_of(auto fn) {
    try {
        fn();
    } catch (const DataError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST(ExperimentCsv, RoundTrip) {
    DelaySeries s;
    s.hours = {0.0, 1.0, 2.5};
    s.delta_ps = {{0.0, 0.1, 1.0 / 3.0}, {0.0, -0.25, -1e-7}};
    const std::vector<RouteSpec> routes{make_route("0", 1000.0), make_route("1", 2000.0)};
    const BurnVector burn{{1, 0}};
    std::stringstream ss;
    write_experiment_csv(ss, s, routes, &burn);
    EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), "hour,route_id,length_ps,burn_bit,delta_ps");
    const auto back = read_experiment_csv(ss);
    ASSERT_EQ(back.routes.size(), 2u);
    ASSERT_TRUE(back.truth);
    EXPECT_EQ(back.truth->bits, burn.bits);
    EXPECT_EQ(back.lengths_ps(), (std::vector<double>{1000.0, 2000.0}));
    for (std::size_t i = 0; i < 2; ++i) {
        EXPECT_EQ(back.routes[i].hours, s.hours);
        EXPECT_EQ(back.routes[i].delta_ps, s.delta_ps[i]);
    }
}

TEST(ExperimentCsv, WithoutTruth) {
    const auto d = parse_csv("hour,route_id,length_ps,delta_ps\n0,a,1000,0\n1,a,1000,0.5\n");
    EXPECT_FALSE(d.truth);
    ASSERT_EQ(d.routes.size(), 1u);
    EXPECT_EQ(d.routes[0].delta_ps[1], 0.5);
}

TEST(ExperimentCsv, Errors) {
    EXPECT_THROW(parse_csv(""), DataError);
    EXPECT_THROW(parse_csv("hour,route_id,length_ps,delta_ps\n"), DataError);
    EXPECT_THROW(parse_csv("hour,route_id,delta_ps\n0,a,0\n"), DataError);
    EXPECT_NE(error_of([] { parse_csv("hour,route_id,length_ps,delta_ps\n0,a,1000,0\n1,a,1000,x\n"); })
                  .find("line 3"),
              std::string::npos);
    EXPECT_THROW(parse_csv("hour,route_id,length_ps,delta_ps\n0,a,1000\n"), DataError);
    EXPECT_THROW(parse_csv("hour,route_id,length_ps,burn_bit,delta_ps\n0,a,1000,2,0\n"), DataError);
    EXPECT_THROW(parse_csv("hour,route_id,length_ps,delta_ps\n0,a,1000,0\n1,a,2000,0\n"), DataError);
    EXPECT_THROW(parse_csv("hour,route_id,length_ps,delta_ps\n1,a,1000,0\n0,a,1000,0\n"), DataError);
    EXPECT_THROW(read_experiment_csv_file("/nonexistent.csv"), DataError);
}

TEST(Sha256, KnownVectors) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(Manifest, FieldsWithoutTimestamps) {
    RunManifest m{"abcd", 42, 0.0, 400.0, {"out.csv"}};
    const auto j = nlohmann::json::parse(m.to_json());
    EXPECT_EQ(j.at("config_sha256"), "abcd");
    EXPECT_EQ(j.at("seed"), 42);
    EXPECT_EQ(j.at("start_hour"), 0.0);
    EXPECT_EQ(j.at("end_hour"), 400.0);
    EXPECT_EQ(j.at("outputs").size(), 1u);
    EXPECT_EQ(j.size(), 5u);
    EXPECT_EQ(m.to_json(), m.to_json());
}

TEST(AttackSummary, AccuracyOnlyWithTruth) {
    const std::vector<BitVerdict> v{{"0", 1, 1.0}, {"1", 0, 0.5}};
    const auto without = nlohmann::json::parse(attack_summary_json("tm1", v, nullptr));
    EXPECT_FALSE(without.contains("accuracy"));
    EXPECT_EQ(without.at("predicted_ones"), 1);
    AccuracyReport r;
    r.total = 2;
    r.correct = 2;
    const auto with = nlohmann::json::parse(attack_summary_json("tm1", v, &r));
    EXPECT_EQ(with.at("accuracy"), 1.0);
}

TEST(VerdictCsv, Format) {
    std::ostringstream out;
    const std::vector<BitVerdict> v{{"7", 1, 0.25}};
    write_verdict_csv(out, v);
    EXPECT_EQ(out.str(), "route_id,predicted,confidence\n7,1,0.250000\n");
}

TEST(FormatNumber, ShortestRoundTrip) {
    for (double x : {0.0, 0.1, 1.0 / 3.0, -2.5e-9, 10000.0})
        EXPECT_EQ(std::stod(format_number(x)), x);
    EXPECT_EQ(format_number(0.5), "0.5");
}

TEST(RunConfig, NamedSchedule) {
    const auto cfg = parse_run_config("routes: 2\nschedule: experiment2\nregime: cloud\nseed: 5\n");
    EXPECT_EQ(cfg.routes().size(), 8u);
    EXPECT_EQ(cfg.seed, 5u);
    EXPECT_EQ(cfg.environment().regime, Regime::Cloud);
    EXPECT_DOUBLE_EQ(cfg.schedule().total_hours(), 200.0);
    EXPECT_EQ(cfg.burn(9).bits, cfg.burn(9).bits);
    EXPECT_NE(cfg.burn(9).bits, cfg.burn(10).bits);
}

TEST(RunConfig, BurnSeedOverridesRunSeed) {
    const auto cfg = parse_run_config("burn_seed: 3\nschedule: experiment2\n");
    EXPECT_EQ(cfg.burn(1).bits, cfg.burn(2).bits);
    EXPECT_EQ(cfg.burn(1).bits, BurnVector::random(64, 3).bits);
}

TEST(RunConfig, ExplicitPhasesAndRepeat) {
    const auto cfg = parse_run_config(
        "routes: 1\nlengths_ps: [2000, 10000]\nburn_bits: \"10\"\ntheta_source: fleet_table\n"
        "regime: cloud\nschedule:\n  - condition burn 200\n  - repeat: 3\n    phases:\n"
        "      - measure\n      - condition zero 1\n");
    const auto s = cfg.schedule();
    EXPECT_EQ(s.theta_source, ThetaSource::FleetTable);
    ASSERT_EQ(s.phases.size(), 7u);
    EXPECT_EQ(std::get<ConditionPhase>(s.phases[0]), (ConditionPhase{ValueSource::Burn, 200.0}));
    EXPECT_TRUE(std::holds_alternative<MeasurePhase>(s.phases[5]));
    EXPECT_EQ(cfg.burn(1).bits, (std::vector<int>{1, 0}));
}

TEST(RunConfig, EnvironmentOverrides) {
    const auto cfg = parse_run_config(
        "schedule: experiment2\nregime: cloud\nenvironment:\n  noise_sigma_ps: 0.08\n  temperature_c: 70\n");
    EXPECT_DOUBLE_EQ(cfg.environment().noise_sigma_ps, 0.08);
    EXPECT_DOUBLE_EQ(cfg.environment().temperature_c, 70.0);
    EXPECT_DOUBLE_EQ(cfg.environment().device_age_factor, Environment::cloud().device_age_factor);
}

TEST(RunConfig, ErrorsCarryLineNumbers) {
    EXPECT_NE(error_of([] { parse_run_config("schedule: experiment1\nbogus: 1\n", "x.cfg"); })
                  .find("x.cfg: line 2"),
              std::string::npos);
    EXPECT_NE(error_of([] { parse_run_config("routes: 2\nschedule: experiment9\n"); }).find("line 2"),
              std::string::npos);
    EXPECT_THROW(parse_run_config("routes: 2\n"), DataError);
    EXPECT_THROW(parse_run_config("schedule: [unclosed\n"), DataError);
    EXPECT_THROW(parse_run_config("- a\n- b\n"), DataError);
    EXPECT_THROW(parse_run_config("routes: 0\nschedule: experiment1\n"), DataError);
    EXPECT_THROW(parse_run_config("burn_bits: \"101\"\nschedule: experiment1\n"), DataError);
    EXPECT_THROW(parse_run_config("schedule: experiment3\ntheta_source: calibration\n"), DataError);
    EXPECT_THROW(parse_run_config("schedule: experiment1\nregime: lab\nenvironment:\n  device_age_factor: 0.5\n"),
                 DataError);
    EXPECT_THROW(parse_run_config("schedule:\n  - measure\n"), DataError);
    EXPECT_THROW(load_run_config("/nonexistent.cfg"), DataError);
}

TEST(RunConfig, ParsePhase) {
    EXPECT_TRUE(std::holds_alternative<CalibratePhase>(parse_phase("calibrate")));
    EXPECT_TRUE(std::holds_alternative<MeasurePhase>(parse_phase("measure")));
    EXPECT_EQ(std::get<ConditionPhase>(parse_phase("condition complement 2.5")),
              (ConditionPhase{ValueSource::Complement, 2.5}));
    EXPECT_EQ(std::get<ConditionPhase>(parse_phase("condition one 1")),
              (ConditionPhase{ValueSource::AllOne, 1.0}));
    EXPECT_THROW(parse_phase("condition purple 1"), DataError);
    EXPECT_THROW(parse_phase("condition burn"), DataError);
    EXPECT_THROW(parse_phase("condition burn x"), DataError);
    EXPECT_THROW(parse_phase("measure now"), DataError);
    EXPECT_THROW(parse_phase("dance"), DataError);
}

TEST(RunConfig, BundledConfigsLoad) {
    for (const char* name : {"experiment1", "experiment2", "experiment3", "custom_example"}) {
        const auto cfg = load_run_config(std::string(PENTIMENTO_SOURCE_DIR) + "/configs/" + name + ".cfg");
        EXPECT_NO_THROW(cfg.schedule().validate()) << name;
    }
}
