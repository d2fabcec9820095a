#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "netscan/error.hpp"
#include "netscan/null_distribution.hpp"
#include "netscan/scan.hpp"
#include "oracles.hpp"

using namespace netscan;

namespace {

struct Flat {
    std::vector<std::string> ids;
    std::vector<ForecastSeries> forecasts;
    std::vector<SensorSeries> actuals;
};

// Constant baseline and count per sensor over [0, hours).
Flat flat(const std::vector<std::pair<double, std::int64_t>>& rates, Hour hours) {
    Flat f;
    for (std::size_t i = 0; i < rates.size(); ++i) {
        const std::string id = "s" + std::to_string(i);
        f.ids.push_back(id);
        f.forecasts.push_back(make_forecast(id, 0, std::vector<double>(static_cast<std::size_t>(hours), rates[i].first),
                                            std::vector<double>(static_cast<std::size_t>(hours), 0.0), 3.0));
        SensorSeries s;
        s.sensor_id = id;
        for (Hour h = 0; h < hours; ++h) {
            s.hours.push_back(h);
            s.counts.push_back(rates[i].second);
        }
        f.actuals.push_back(s);
    }
    return f;
}

SpatialRegion region(std::string key, std::vector<std::size_t> members, double extent) {
    SpatialRegion r;
    r.key = std::move(key);
    r.members = std::move(members);
    r.footprint = r.members;
    r.extent = extent;
    return r;
}

}  // namespace

TEST(Windows, DefaultFamilyEndsAtLast) {
    const auto w = enumerate_windows(0, 71, WindowFamily{48, 1, false});
    ASSERT_EQ(w.size(), 48u);
    for (std::size_t i = 0; i < w.size(); ++i) {
        EXPECT_EQ(w[i].end, 71);
        EXPECT_EQ(w[i].length(), static_cast<Hour>(i + 1));
    }
}

TEST(Windows, StrideAndAllWindows) {
    EXPECT_EQ(enumerate_windows(0, 47, WindowFamily{48, 6, false}).size(), 8u);
    const auto all = enumerate_windows(0, 9, WindowFamily{4, 1, true});
    EXPECT_EQ(all.size(), 1u + 2u + 3u + 4u * 7u);
    for (const auto& w : all) {
        EXPECT_GE(w.start, 0);
        EXPECT_LE(w.end, 9);
        EXPECT_LE(w.length(), 4);
    }
    EXPECT_EQ(enumerate_windows(5, 6, WindowFamily{48, 1, false}).size(), 2u);
    EXPECT_THROW(enumerate_windows(0, 5, WindowFamily{0, 1, false}), InvalidInput);
}

TEST(Scan, PrefixSumsMatchNaiveLoops) {
    std::mt19937_64 rng(77);
    for (int rep = 0; rep < 50; ++rep) {
        const auto in = oracle::random_scan_instance(rng);
        const ScanFrame frame(in.ids, in.forecasts, in.actuals, in.first, in.last);
        const auto scores = scan(in.spatial, in.regions, frame, ScanOptions{});
        ASSERT_EQ(scores.size(), in.regions.size());
        for (const auto& s : scores) {
            const auto t = oracle::naive_totals(in.spatial[s.region.spatial].members, s.region.window,
                                                in.forecasts, in.actuals);
            EXPECT_EQ(s.aggregates.count, t.count);
            EXPECT_EQ(s.aggregates.baseline, t.baseline);
            RegionAggregates a;
            a.count = t.count;
            a.baseline = t.baseline;
            EXPECT_EQ(s.value.log_raw, ebp_score(a).log_raw);
        }
    }
}

TEST(Scan, SortedWithRanks) {
    std::mt19937_64 rng(5);
    const auto in = oracle::random_scan_instance(rng);
    const ScanFrame frame(in.ids, in.forecasts, in.actuals, in.first, in.last);
    const auto scores = scan(in.spatial, in.regions, frame, ScanOptions{});
    for (std::size_t i = 0; i < scores.size(); ++i) {
        EXPECT_EQ(scores[i].rank, i + 1);
        if (i > 0) EXPECT_FALSE(outranks(scores[i], scores[i - 1], in.spatial, ScoreScale::log));
    }
    const auto top = top_region(scores, in.spatial);
    ASSERT_TRUE(top.has_value());
    EXPECT_EQ(top->rank, 1u);
}

TEST(Scan, BalancedCountsScoreNeutral) {
    const auto f = flat({{10, 10}, {4, 4}}, 24);
    const ScanFrame frame(f.ids, f.forecasts, f.actuals, 0, 23);
    const std::vector<SpatialRegion> spatial{region("a", {0}, 1), region("ab", {0, 1}, 2)};
    std::vector<SpaceTimeRegion> regions{{0, {0, 23}}, {1, {5, 10}}};
    for (const auto& s : scan(spatial, regions, frame, ScanOptions{Metric::ebp})) EXPECT_EQ(s.value.raw, 1.0);
    for (const auto& s : scan(spatial, regions, frame, ScanOptions{Metric::asym})) EXPECT_EQ(s.value.raw, 0.0);
}

TEST(Scan, SurgingSensorRegionWins) {
    const auto f = flat({{10, 30}, {10, 10}}, 24);
    const ScanFrame frame(f.ids, f.forecasts, f.actuals, 0, 23);
    const std::vector<SpatialRegion> spatial{region("disjoint", {1}, 1), region("surging", {0}, 1)};
    const auto scores = scan(spatial, {{0, {0, 23}}, {1, {0, 23}}}, frame, ScanOptions{});
    ASSERT_EQ(scores.size(), 2u);
    EXPECT_EQ(spatial[scores[0].region.spatial].key, "surging");
    EXPECT_NEAR(scores[0].value.log_raw, 720.0 * std::log(3.0) + 240.0 - 720.0, 1e-9);
    EXPECT_EQ(scores[1].value.log_raw, 0.0);
}

TEST(Scan, ForwardSurgeBeatsReverse) {
    std::vector<EdgeInput> edges(2);
    edges[0] = EdgeInput{"a", {{0, 0}, {0.001, 0}}, 100.0, false};
    edges[1] = EdgeInput{"b", {{0.001, 0}, {0.002, 0}}, 100.0, false};
    const auto segs = segment_network(make_road_network(edges), 100.0);
    std::vector<SensorPlacement> sensors(4);
    const Direction dirs[4] = {Direction::forward, Direction::reverse, Direction::forward, Direction::reverse};
    for (int i = 0; i < 4; ++i) {
        sensors[i].id = "s" + std::to_string(i);
        sensors[i].segment = i / 2;
        sensors[i].direction = dirs[i];
    }
    PathEnumerationOptions po;
    po.min_length_m = 150;
    po.max_length_m = 250;
    const auto paths = enumerate_paths(segs, po);
    ASSERT_EQ(paths.size(), 1u);
    const auto spatial = network_regions(paths, SegmentSensorIndex(sensors, segs.size()), DirectionMode::directed);
    ASSERT_EQ(spatial.size(), 2u);

    const auto f = flat({{10, 30}, {10, 10}, {10, 30}, {10, 10}}, 24);
    const ScanFrame frame(f.ids, f.forecasts, f.actuals, 0, 23);
    const bool along = paths[0].along_geometry[0];
    const auto scores = scan(spatial, {{0, {0, 23}}, {1, {0, 23}}}, frame, ScanOptions{});
    const auto& best = spatial[scores[0].region.spatial];
    EXPECT_EQ(best.direction, along ? Direction::forward : Direction::reverse);
    EXPECT_GT(scores[0].value.log_raw, scores[1].value.log_raw);
}

TEST(Scan, TiesBreakOnExtentThenKey) {
    const auto f = flat({{10, 5}, {10, 5}, {10, 5}}, 24);
    const ScanFrame frame(f.ids, f.forecasts, f.actuals, 0, 23);
    const std::vector<SpatialRegion> spatial{region("b", {0, 1}, 2), region("z", {2}, 1), region("c", {1}, 1)};
    std::vector<SpaceTimeRegion> regions{{0, {0, 23}}, {1, {0, 23}}, {2, {0, 23}}};
    const auto top = top_region(scan(spatial, regions, frame, ScanOptions{}), spatial);
    ASSERT_TRUE(top.has_value());
    EXPECT_EQ(spatial[top->region.spatial].key, "c");

    const std::vector<SpatialRegion> sized{region("a", {0, 1}, 2), region("b", {0}, 1)};
    const auto top2 = top_region(scan(sized, {{0, {0, 23}}, {1, {0, 23}}}, frame, ScanOptions{}), sized);
    EXPECT_EQ(sized[top2->region.spatial].key, "b");

    EXPECT_FALSE(top_region({}, spatial).has_value());
}

TEST(Scan, EarlierWindowWinsTie) {
    const auto f = flat({{10, 5}}, 24);
    const ScanFrame frame(f.ids, f.forecasts, f.actuals, 0, 23);
    const std::vector<SpatialRegion> spatial{region("a", {0}, 1)};
    const auto top = top_region(scan(spatial, {{0, {12, 23}}, {0, {3, 23}}}, frame, ScanOptions{}), spatial);
    EXPECT_EQ(top->region.window.start, 3);
}

TEST(Scan, MissingHoursSkipRegion) {
    auto f = flat({{10, 12}, {10, 12}}, 24);
    f.actuals[1].hours.erase(f.actuals[1].hours.begin() + 5);
    f.actuals[1].counts.erase(f.actuals[1].counts.begin() + 5);
    const ScanFrame frame(f.ids, f.forecasts, f.actuals, 0, 23);
    const std::vector<SpatialRegion> spatial{region("a", {0}, 1), region("b", {1}, 1)};
    ScanStats stats;
    const auto scores = scan(spatial, {{0, {0, 23}}, {1, {0, 23}}, {1, {10, 23}}}, frame, ScanOptions{}, &stats);
    EXPECT_EQ(stats.skipped, 1u);
    EXPECT_EQ(stats.scored, 2u);
    EXPECT_EQ(scores.size(), 2u);
    EXPECT_FALSE(frame.aggregate(std::vector<std::size_t>{1}, {0, 23}).has_value());
}

TEST(Scan, ScanTopAgreesWithFullScan) {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 10; ++rep) {
        const auto in = oracle::random_scan_instance(rng);
        const ScanFrame frame(in.ids, in.forecasts, in.actuals, in.first, in.last);
        const auto windows = enumerate_windows(in.first, in.last, WindowFamily{48, 1, false});
        std::vector<SpaceTimeRegion> all;
        for (std::size_t s = 0; s < in.spatial.size(); ++s)
            for (const auto& w : windows) all.push_back({s, w});
        const auto full = scan(in.spatial, all, frame, ScanOptions{});
        const auto top = scan_top(in.spatial, windows, frame, ScanOptions{});
        ASSERT_TRUE(top.has_value());
        EXPECT_EQ(top->region.spatial, full.front().region.spatial);
        EXPECT_EQ(top->region.window, full.front().region.window);
        EXPECT_EQ(top->value.log_raw, full.front().value.log_raw);
    }
}

TEST(Heatmap, MeansOverCoveringRegions) {
    HeatmapAccumulator one(4, ScoreScale::log);
    one.add(region("a", {2}, 1), 5.0);
    const auto m1 = one.means();
    EXPECT_FALSE(m1[0].has_value());
    EXPECT_EQ(m1[2], 5.0);

    HeatmapAccumulator two(3, ScoreScale::log);
    two.add(region("a", {0, 1}, 2), 1.0);
    two.add(region("b", {1}, 1), 3.0);
    const auto m2 = two.means();
    EXPECT_EQ(m2[0], 1.0);
    EXPECT_EQ(m2[1], 2.0);
    EXPECT_FALSE(m2[2].has_value());

    HeatmapAccumulator same(3, ScoreScale::log);
    same.add(region("a", {0, 1}, 2), 4.5);
    same.add(region("b", {1, 2}, 2), 4.5);
    for (const auto& v : same.means()) EXPECT_EQ(v, 4.5);
}

TEST(Null, ThresholdAndCorrectedScore) {
    NullDistribution null;
    for (int i = 1; i <= 101; ++i) null.samples.push_back(i);
    EXPECT_EQ(null.threshold(99.0), 100.0);
    EXPECT_EQ(null.threshold(100.0), 101.0);
    EXPECT_EQ(corrected_score(100.0, null), 0.0);
    EXPECT_LT(corrected_score(50.0, null), 0.0);
    EXPECT_GT(corrected_score(100.5, null), 0.0);
}

TEST(Null, RefusesSmallSample) {
    NullDistribution null;
    null.samples.assign(19, 1.0);
    EXPECT_THROW(null.threshold(), CalibrationError);
    null.samples.push_back(1.0);
    EXPECT_NO_THROW(null.threshold());
}
