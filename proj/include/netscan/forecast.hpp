#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "netscan/gaussian_process.hpp"
#include "netscan/holt_winters.hpp"
#include "netscan/series.hpp"

namespace netscan {

enum class ForecastMethod { holt_winters, gaussian_process };

const char* to_string(ForecastMethod m);
ForecastMethod forecast_method_from_string(const std::string& text);

// Multiplicative weekday profile: weekday mean / overall mean, estimated on
// training data only. Weekdays absent from the training data get 1.
struct WeekdayFactors {
    std::array<double, 7> factor{1, 1, 1, 1, 1, 1, 1};

    static WeekdayFactors estimate(const SensorSeries& train);
    double at(Hour h) const { return factor[static_cast<std::size_t>(weekday_of(h))]; }
};

// Training counts divided by their weekday factor.
std::vector<double> weekday_adjusted(const SensorSeries& train, const WeekdayFactors& factors);

// Holt-Winters parameters fitted on weekday-adjusted counts.
HwParams fit_holt_winters(const SensorSeries& train);

// Forecast for the `horizon` hours after the end of `train`. The std is zero,
// so both bounds equal the mean.
ForecastSeries forecast_holt_winters(const HwParams& params, const SensorSeries& train,
                                     std::size_t horizon, double sigma_k = 3.0);

struct GpFit {
    GpState state;
    Hour origin = 0;      // first training hour
    Hour next_hour = 0;   // first hour after training
    std::string sensor_id;
};

GpFit fit_gp(const SensorSeries& train, const GpConfig& config);
ForecastSeries forecast_gp(const GpFit& fit, std::size_t horizon, double sigma_k = 3.0);

struct ForecastOptions {
    ForecastMethod method = ForecastMethod::holt_winters;
    double sigma_k = 3.0;
    GpConfig gp;
};

// Fits on `train` and forecasts `horizon` hours after it.
ForecastSeries forecast_sensor(const SensorSeries& train, std::size_t horizon,
                               const ForecastOptions& options);

// Per-sensor forecasts of the hours [train_end, forecast_end), trained on
// [train_end - train_hours, train_end). Sensors run on up to `threads`
// workers; output order follows `data`.
std::vector<ForecastSeries> forecast_all(const std::vector<SensorSeries>& data, Hour train_end,
                                         Hour train_hours, Hour forecast_end,
                                         const ForecastOptions& options, int threads = 1);

}  // namespace netscan
