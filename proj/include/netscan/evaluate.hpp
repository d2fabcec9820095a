#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "netscan/forecast.hpp"
#include "netscan/null_distribution.hpp"
#include "netscan/pipeline.hpp"
#include "netscan/simulate.hpp"
#include "netscan/stats.hpp"

namespace netscan {

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
};

// Over sensor ids. Precision is 0 for an empty top region. Throws
// InvalidInput for an empty truth set.
PrecisionRecall spatial_precision_recall(const std::vector<std::string>& top_members,
                                         const std::set<std::string>& truth);

// 1-based index of the first non-negative corrected score.
std::optional<int> detection_day(std::span<const double> corrected);

struct TrialResult {
    std::uint64_t trial = 0;
    ScanType scan = ScanType::planar;
    ForecastMethod forecast = ForecastMethod::holt_winters;
    std::optional<int> detect_day;
    double precision = 0.0;
    double recall = 0.0;
    std::vector<double> scores;  // corrected top score per surge day
    double forecast_secs = 0.0;
    double scan_secs = 0.0;
    // "no-snapped-truth" when a NET trial's surge missed the network,
    // "failed: ..." when the trial could not run.
    std::string flags;

    bool failed() const { return flags.starts_with("failed"); }
};

using NullKey = std::pair<ScanType, ForecastMethod>;

struct BenchmarkConfig {
    SimConfig sim;  // days_total is set per trial
    SurgeOptions surge;
    ScanConfig scan;
    ForecastOptions forecast;  // method is set per configuration
    std::vector<ScanType> scans{ScanType::planar, ScanType::network};
    std::vector<ForecastMethod> methods{ForecastMethod::holt_winters};
    int trials = 20;
    std::uint64_t seed = 0;
    int threads = 1;
    bool record_timings = true;
};

// Days of data one trial generates: training, the lead-in before the first
// outbreak day's scan period ends, and the outbreak days.
int trial_days_total(const BenchmarkConfig& config);

// Seed of trial `t`; shared by every configuration so they see the same data.
std::uint64_t trial_seed(std::uint64_t seed, int trial);

// Runs every trial for every scan type and forecast method. Each trial's
// forecasts come from the training span before the first outbreak day's scan
// period and cover all outbreak days. Failed trials are recorded, not thrown.
std::vector<TrialResult> run_benchmark(const ScanSetup& setup,
                                       const std::vector<SensorProfile>& profiles,
                                       const Boundary& boundary,
                                       const std::map<NullKey, NullDistribution>& nulls,
                                       const BenchmarkConfig& config);

struct MeanInterval {
    double mean = 0.0;
    Interval ci;
};

struct ConfigSummary {
    ScanType scan = ScanType::planar;
    ForecastMethod forecast = ForecastMethod::holt_winters;
    std::size_t trials = 0;
    std::size_t failed = 0;
    std::size_t flagged = 0;
    double detection_rate = 0.0;  // detected by the last outbreak day
    std::optional<double> mean_detect_day;
    MeanInterval precision;
    MeanInterval recall;
    std::vector<MeanInterval> score_by_day;
    double mean_forecast_secs = 0.0;
    double mean_scan_secs = 0.0;
};

struct BenchmarkReport {
    std::size_t trials = 0;
    std::vector<ConfigSummary> configs;  // sorted by (scan, forecast)
};

// Aggregates per (scan, forecast) with bootstrap intervals. Throws
// BenchmarkError when more than 10% of a configuration's trials failed.
BenchmarkReport build_report(const std::vector<TrialResult>& results, double level = 0.95,
                             std::size_t resamples = 2000, std::uint64_t seed = 0);

std::string format_report(const BenchmarkReport& report);

}  // namespace netscan
