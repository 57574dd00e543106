#include "pentimento/assets.hpp"
#include "pentimento/errors.hpp"

#include "properties.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace pentimento;

TEST(AssetStats, SingleRoute) {
    const auto s = compute_stats(AssetRecord{"/x", AssetType::S, {500.0}});
    EXPECT_EQ(s.bus_width, 1u);
    EXPECT_EQ(s.mean, 500.0);
    EXPECT_EQ(s.min, 500.0);
    EXPECT_EQ(s.max, 500.0);
    EXPECT_EQ(s.p50, 500.0);
    EXPECT_EQ(s.sd, 0.0);
}

TEST(AssetStats, ZeroToHundredMatchesBruteForce) {
    AssetRecord rec{"/x", AssetType::CK, {}};
    for (int i = 100; i >= 0; --i)
        rec.route_lengths_ps.push_back(i);
    double sum = 0.0;
    for (double v : rec.route_lengths_ps)
        sum += v;
    const double mean = sum / 101.0;
    double ss = 0.0;
    for (double v : rec.route_lengths_ps)
        ss += (v - mean) * (v - mean);
    const auto s = compute_stats(rec);
    EXPECT_EQ(s.bus_width, 101u);
    EXPECT_DOUBLE_EQ(s.mean, 50.0);
    EXPECT_DOUBLE_EQ(s.mean, mean);
    EXPECT_NEAR(s.sd, std::sqrt(ss / 100.0), 1e-12);
    EXPECT_DOUBLE_EQ(s.min, 0.0);
    EXPECT_DOUBLE_EQ(s.p25, 25.0);
    EXPECT_DOUBLE_EQ(s.p50, 50.0);
    EXPECT_DOUBLE_EQ(s.p75, 75.0);
    EXPECT_DOUBLE_EQ(s.max, 100.0);
}

TEST(AssetStats, InterpolatedQuartiles) {
    const auto s = compute_stats(AssetRecord{"/x", AssetType::CK, {4.0, 1.0, 3.0, 2.0}});
    EXPECT_DOUBLE_EQ(s.p25, 1.75);
    EXPECT_DOUBLE_EQ(s.p50, 2.5);
    EXPECT_DOUBLE_EQ(s.p75, 3.25);
    EXPECT_THROW(compute_stats(AssetRecord{"/x", AssetType::CK, {}}), DataError);
}

TEST(Vulnerability, ZeroLengthRoutesNeverDrift) {
    const auto v = vulnerability(AssetRecord{"/x", AssetType::CK, {0.0, 0.0, 0.0}}, 200.0,
                                 Environment::lab());
    EXPECT_EQ(v.fraction, 0.0);
    EXPECT_EQ(v.vulnerable_bits, 0u);
}

TEST(Vulnerability, LongRoutesAllVulnerable) {
    const auto v = vulnerability(AssetRecord{"/x", AssetType::CK, std::vector<double>(32, 10000.0)},
                                 200.0, Environment::lab());
    EXPECT_EQ(v.fraction, 1.0);
    for (double d : v.expected_abs_delta_ps)
        EXPECT_GE(d, 10.0);
}

TEST(Vulnerability, MixedInventoryMatchesPerBitEvaluation) {
    const AssetRecord rec{"/x", AssetType::SVT, {0.0, 3.0, 15.0, 40.0, 120.0, 800.0, 2500.0, 9000.0}};
    for (const auto& env : {Environment::lab(), Environment::cloud()}) {
        for (double hours : {1.0, 24.0, 200.0}) {
            const double threshold = default_detect_threshold_ps(env);
            std::size_t expected = 0;
            for (double len : rec.route_lengths_ps) {
                double d = 0.0;
                if (len > 0.0)
                    d = std::abs(evolve(fresh_state(make_route("b", len)), StressSegment{hours, 1, env})
                                     .delta_ps());
                expected += d > threshold ? 1 : 0;
            }
            const auto v = vulnerability(rec, hours, env);
            EXPECT_EQ(v.vulnerable_bits, expected) << hours;
            EXPECT_DOUBLE_EQ(v.fraction, static_cast<double>(expected) / rec.route_lengths_ps.size());
        }
    }
    EXPECT_THROW(vulnerability(rec, -1.0, Environment::lab()), ContractViolation);
}

TEST(Vulnerability, DefaultThresholdIsTwiceNoiseFloor) {
    const auto env = Environment::cloud();
    EXPECT_DOUBLE_EQ(default_detect_threshold_ps(env),
                     2.0 * measurement_noise_floor_ps(SensorConfig{}, env.noise_sigma_ps));
}

TEST(AssetCsv, ReadsAndGroups) {
    std::istringstream in("asset_path,asset_type,length_ps\n/a,CK,10\n/b,SV/T,20\n/a,CK,30\n");
    const auto recs = read_asset_csv(in);
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[0].path, "/a");
    EXPECT_EQ(recs[0].route_lengths_ps, (std::vector<double>{10.0, 30.0}));
    EXPECT_EQ(recs[1].type, AssetType::SVT);
}

TEST(AssetCsv, Errors) {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_asset_csv(in);
    };
    EXPECT_THROW(parse(""), DataError);
    EXPECT_THROW(parse("asset_path,asset_type,length_ps\n"), DataError);
    EXPECT_THROW(parse("path,type,len\n/a,CK,1\n"), DataError);
    EXPECT_THROW(parse("asset_path,asset_type,length_ps\n/a,XX,1\n"), DataError);
    EXPECT_THROW(parse("asset_path,asset_type,length_ps\n/a,CK,abc\n"), DataError);
    EXPECT_THROW(parse("asset_path,asset_type,length_ps\n/a,CK,-3\n"), DataError);
    EXPECT_THROW(parse("asset_path,asset_type,length_ps\n/a,CK,1\n/a,S,2\n"), DataError);
    try {
        parse("asset_path,asset_type,length_ps\n/a,CK,1\n/a,CK\n");
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
    }
    EXPECT_THROW(read_asset_csv_file("/nonexistent/assets.csv"), DataError);
}

TEST(AssetCsv, StatsTableColumnsAndOrder) {
    const std::vector<AssetRecord> recs{{"/big", AssetType::CK, {100.0, 900.0}},
                                        {"/small", AssetType::S, {5.0, 7.0}}};
    std::ostringstream out;
    write_stats_csv(out, recs);
    std::istringstream lines(out.str());
    std::string header, first, second;
    std::getline(lines, header);
    std::getline(lines, first);
    std::getline(lines, second);
    EXPECT_EQ(header, "index,asset_path,asset_type,bus_width,mean,sd,min,p25,p50,p75,max");
    EXPECT_EQ(first.substr(0, 9), "1,/small,");
    EXPECT_EQ(second.substr(0, 7), "2,/big,");
}

#define PROPERTY_TEST(fn)                                            \
    TEST(AssetProperty, fn) {                                        \
        const auto r = pentimento::testing::fn(0xa55);               \
        EXPECT_TRUE(r.ok()) << r.summary();                          \
        EXPECT_GE(r.cases, pentimento::testing::kMinCases);          \
    }

PROPERTY_TEST(stats_permutation_invariance)
PROPERTY_TEST(percentile_ordering)
PROPERTY_TEST(vulnerability_monotone)
