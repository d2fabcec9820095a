#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "netscan/time.hpp"

namespace netscan {

// Hourly counts for one sensor. After preprocessing the timestamps are
// contiguous; raw input may have gaps.
struct SensorSeries {
    std::string sensor_id;
    std::vector<Hour> hours;  // strictly increasing
    std::vector<std::int64_t> counts;

    std::size_t size() const { return hours.size(); }
    bool empty() const { return hours.empty(); }
    bool contiguous() const;
    int weekday(std::size_t i) const { return weekday_of(hours[i]); }

    // Observations with hour in [from, to). Requires a contiguous series.
    SensorSeries slice(Hour from, Hour to) const;
};

constexpr double baseline_floor = 1e-6;

struct ForecastSeries {
    std::string sensor_id;
    std::vector<Hour> hours;
    std::vector<double> mean;
    std::vector<double> std;
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t size() const { return hours.size(); }
};

// Builds bounds upper = mean + k*std, lower = max(mean - k*std, floor), with
// the mean itself clamped to the floor.
ForecastSeries make_forecast(std::string sensor_id, Hour first_hour, std::vector<double> mean,
                             std::vector<double> std, double sigma_k);

struct PreprocessOptions {
    Hour max_gap_hours = 6;
    double min_coverage = 0.8;
    double anomaly_multiple = 5.0;  // of the series' 99th percentile
};

struct Rejection {
    enum class Reason { empty, coverage, gap };
    Reason reason;
    std::string detail;
};

using PreprocessResult = std::variant<SensorSeries, Rejection>;

// Removes outliers, interpolates short gaps (rounded to the nearest integer)
// and rejects series that are too sparse or have a gap longer than allowed.
PreprocessResult preprocess(const SensorSeries& series, const PreprocessOptions& options);

}  // namespace netscan
