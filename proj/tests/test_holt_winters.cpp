#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "netscan/error.hpp"
#include "netscan/forecast.hpp"
#include "netscan/holt_winters.hpp"

using namespace netscan;

namespace {

SensorSeries hourly(const std::vector<double>& v, Hour first = 0) {
    SensorSeries s;
    s.sensor_id = "s";
    for (std::size_t i = 0; i < v.size(); ++i) {
        s.hours.push_back(first + static_cast<Hour>(i));
        s.counts.push_back(std::llround(v[i]));
    }
    return s;
}

}  // namespace

// One observed step then two fed-back steps from a state seeded by the first
// 24 values. Expected rows were computed in exact rational arithmetic.
TEST(HoltWinters, ThreeStepTrace) {
    const std::vector<double> c{12, 9, 7, 5, 4, 6, 11, 20, 35, 42, 38, 30, 28,
                                29, 31, 33, 40, 45, 37, 26, 21, 18, 15, 13, 14};
    HwState s;
    s.level = 0.0;
    for (std::size_t j = 0; j < 24; ++j) s.level += c[j];
    s.level /= 24.0;
    s.trend = 0.0;
    for (std::size_t j = 0; j < 24; ++j) s.season.push_back(c[j] / s.level);
    const HwParams p{0.3, 0.1, 0.25};

    struct Row {
        double prediction, level, trend, season;
    };
    const Row expected[3] = {
        {12.0, 24.28125, 0.115625, 0.5333333333333333},
        {9.495, 24.396875, 0.115625, 0.3891891891891892},
        {7.42, 24.5125, 0.115625, 0.3027027027027027},
    };
    double obs = c[24];
    for (int k = 0; k < 3; ++k) {
        const std::size_t slot = s.phase;
        const double pred = s.step(obs, p);
        EXPECT_NEAR(pred, expected[k].prediction, 1e-12);
        EXPECT_NEAR(s.level, expected[k].level, 1e-12);
        EXPECT_NEAR(s.trend, expected[k].trend, 1e-12);
        EXPECT_NEAR(s.season[slot], expected[k].season, 1e-12);
        obs = s.predict();
    }
}

TEST(HoltWinters, ConstantSeriesIsFixedPoint) {
    const std::vector<double> v(21 * 24, 10.0);
    const auto params = fit_holt_winters_params(v);
    const auto model = run_holt_winters(v, params);
    EXPECT_NEAR(model.state.trend, 0.0, 1e-12);
    for (double z : model.state.season) EXPECT_NEAR(z, 1.0, 1e-12);
    for (double f : extrapolate_holt_winters(model, 72)) EXPECT_NEAR(f, 10.0, 1e-9);

    const auto fc = forecast_holt_winters(fit_holt_winters(hourly(v)), hourly(v), 48);
    ASSERT_EQ(fc.size(), 48u);
    EXPECT_EQ(fc.hours.front(), 21 * 24);
    for (double m : fc.mean) EXPECT_NEAR(m, 10.0, 1e-9);
}

TEST(HoltWinters, PeriodicSeriesOneStepError) {
    std::vector<double> v;
    for (int t = 0; t < 21 * 24; ++t) v.push_back(50.0 + 30.0 * std::sin(2.0 * std::numbers::pi * t / 24.0));
    const auto params = fit_holt_winters_params(v);
    HwState s = initial_state(v);
    for (std::size_t t = 24; t < v.size(); ++t) {
        const double pred = s.step(v[t], params);
        EXPECT_LT(std::abs(pred - v[t]) / v[t], 0.01) << "t=" << t;
    }
}

TEST(HoltWinters, FittedParamsInsideUnitInterval) {
    std::mt19937_64 rng(3);
    std::poisson_distribution<int> noise(20);
    std::vector<double> v;
    for (int t = 0; t < 14 * 24; ++t) v.push_back(noise(rng) * (1.0 + 0.5 * std::sin(t * 0.2618)));
    const auto p = fit_holt_winters_params(v);
    for (double x : {p.alpha, p.beta, p.gamma}) {
        EXPECT_GT(x, 0.0);
        EXPECT_LT(x, 1.0);
    }
    EXPECT_LE(one_step_mse(v, p), one_step_mse(v, HwParams{}));
}

TEST(HoltWinters, AllZeroIsDegenerate) {
    const std::vector<double> v(21 * 24, 0.0);
    const auto model = run_holt_winters(v, HwParams{});
    EXPECT_TRUE(model.degenerate);
    for (double f : extrapolate_holt_winters(model, 10)) EXPECT_EQ(f, 0.0);
    const auto fc = forecast_holt_winters(HwParams{}, hourly(v), 24);
    for (double m : fc.mean) EXPECT_EQ(m, baseline_floor);
}

TEST(HoltWinters, NegativeExtrapolationClamped) {
    std::vector<double> v;
    for (int t = 0; t < 21 * 24; ++t) v.push_back(std::max(0.0, 400.0 - 0.9 * t));
    const auto fc = forecast_holt_winters(HwParams{0.9, 0.9, 0.1}, hourly(v), 200);
    for (double m : fc.mean) EXPECT_GE(m, baseline_floor);
}

TEST(HoltWinters, RequiresTwoPeriods) {
    const std::vector<double> v(47, 1.0);
    EXPECT_THROW(initial_state(v), InvalidInput);
}

TEST(HoltWinters, ForecastIgnoresDataAfterTrainingEnd) {
    std::mt19937_64 rng(8);
    std::poisson_distribution<int> noise(30);
    std::vector<SensorSeries> data(1);
    data[0].sensor_id = "s";
    for (Hour h = 0; h < 25 * 24; ++h) {
        data[0].hours.push_back(h);
        data[0].counts.push_back(noise(rng));
    }
    ForecastOptions o;
    const Hour train_end = 22 * 24;
    const auto clean = forecast_all(data, train_end, 21 * 24, train_end + 48, o);
    auto poisoned = data;
    for (std::size_t i = static_cast<std::size_t>(train_end); i < poisoned[0].counts.size(); ++i) {
        poisoned[0].counts[i] = 1'000'000;
    }
    const auto after = forecast_all(poisoned, train_end, 21 * 24, train_end + 48, o);
    ASSERT_EQ(clean.size(), 1u);
    EXPECT_EQ(clean[0].mean, after[0].mean);
    EXPECT_EQ(clean[0].hours.front(), train_end);
    EXPECT_EQ(clean[0].size(), 48u);
}

TEST(WeekdayFactors, UnitMeanProfile) {
    std::vector<double> v;
    for (int t = 0; t < 14 * 24; ++t) v.push_back(weekday_of(t) == 0 ? 20.0 : 10.0);
    const auto f = WeekdayFactors::estimate(hourly(v));
    EXPECT_GT(f.factor[0], f.factor[1]);
    EXPECT_NEAR(f.factor[0] / f.factor[1], 2.0, 1e-12);
}
