#include "netscan/forecast.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "netscan/error.hpp"
#include "netscan/parallel.hpp"

namespace netscan {

const char* to_string(ForecastMethod m) {
    return m == ForecastMethod::holt_winters ? "hw" : "gp";
}

ForecastMethod forecast_method_from_string(const std::string& text) {
    if (text == "hw") return ForecastMethod::holt_winters;
    if (text == "gp") return ForecastMethod::gaussian_process;
    throw InvalidInput("unknown forecast method '" + text + "' (expected hw or gp)");
}

WeekdayFactors WeekdayFactors::estimate(const SensorSeries& train) {
    WeekdayFactors f;
    std::array<double, 7> sum{};
    std::array<std::size_t, 7> n{};
    double total = 0.0;
    for (std::size_t i = 0; i < train.size(); ++i) {
        const auto w = static_cast<std::size_t>(train.weekday(i));
        sum[w] += static_cast<double>(train.counts[i]);
        ++n[w];
        total += static_cast<double>(train.counts[i]);
    }
    if (train.empty() || total <= 0.0) return f;
    const double overall = total / static_cast<double>(train.size());
    for (std::size_t w = 0; w < 7; ++w) {
        // A weekday with no traffic keeps a small positive factor so
        // adjustment stays invertible.
        if (n[w] > 0) f.factor[w] = std::max(sum[w] / static_cast<double>(n[w]) / overall, 1e-3);
    }
    return f;
}

std::vector<double> weekday_adjusted(const SensorSeries& train, const WeekdayFactors& factors) {
    std::vector<double> out(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        out[i] = static_cast<double>(train.counts[i]) / factors.at(train.hours[i]);
    }
    return out;
}

namespace {

void require_contiguous(const SensorSeries& train) {
    if (!train.contiguous()) {
        throw InvalidInput("training series for sensor '" + train.sensor_id +
                           "' has gaps; preprocess it first");
    }
}

}  // namespace

HwParams fit_holt_winters(const SensorSeries& train) {
    require_contiguous(train);
    return fit_holt_winters_params(weekday_adjusted(train, WeekdayFactors::estimate(train)));
}

ForecastSeries forecast_holt_winters(const HwParams& params, const SensorSeries& train,
                                     std::size_t horizon, double sigma_k) {
    if (horizon < 1) throw InvalidInput("forecast horizon must be at least one hour");
    require_contiguous(train);
    const WeekdayFactors factors = WeekdayFactors::estimate(train);
    const HwModel model = run_holt_winters(weekday_adjusted(train, factors), params);
    if (model.degenerate) {
        spdlog::warn("sensor '{}': all-zero training data, using a constant {} baseline",
                     train.sensor_id, baseline_floor);
    }
    std::vector<double> mean = extrapolate_holt_winters(model, horizon);
    const Hour first = train.hours.back() + 1;
    for (std::size_t h = 0; h < horizon; ++h) mean[h] *= factors.at(first + static_cast<Hour>(h));
    return make_forecast(train.sensor_id, first, std::move(mean), std::vector<double>(horizon, 0.0),
                         sigma_k);
}

GpFit fit_gp(const SensorSeries& train, const GpConfig& config) {
    require_contiguous(train);
    if (train.empty()) throw InvalidInput("empty training series");
    GpFit fit;
    fit.sensor_id = train.sensor_id;
    fit.origin = train.hours.front();
    fit.next_hour = train.hours.back() + 1;
    std::vector<double> x(train.size());
    std::vector<double> y(train.size());
    for (std::size_t i = 0; i < train.size(); ++i) {
        x[i] = static_cast<double>(train.hours[i] - fit.origin);
        y[i] = static_cast<double>(train.counts[i]);
    }
    fit.state = fit_gp(x, y, config);
    return fit;
}

ForecastSeries forecast_gp(const GpFit& fit, std::size_t horizon, double sigma_k) {
    if (horizon < 1) throw InvalidInput("forecast horizon must be at least one hour");
    std::vector<double> x(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        x[h] = static_cast<double>(fit.next_hour - fit.origin) + static_cast<double>(h);
    }
    GpPrediction p = predict_gp(fit.state, x);
    return make_forecast(fit.sensor_id, fit.next_hour, std::move(p.mean), std::move(p.std),
                         sigma_k);
}

ForecastSeries forecast_sensor(const SensorSeries& train, std::size_t horizon,
                               const ForecastOptions& options) {
    if (options.method == ForecastMethod::holt_winters) {
        return forecast_holt_winters(fit_holt_winters(train), train, horizon, options.sigma_k);
    }
    return forecast_gp(fit_gp(train, options.gp), horizon, options.sigma_k);
}

std::vector<ForecastSeries> forecast_all(const std::vector<SensorSeries>& data, Hour train_end,
                                         Hour train_hours, Hour forecast_end,
                                         const ForecastOptions& options, int threads) {
    if (forecast_end <= train_end) throw InvalidInput("forecast period must follow training");
    const auto horizon = static_cast<std::size_t>(forecast_end - train_end);
    std::vector<ForecastSeries> out(data.size());
    parallel_for(data.size(), threads, [&](std::size_t i) {
        const SensorSeries train = data[i].slice(train_end - train_hours, train_end);
        if (static_cast<Hour>(train.size()) != train_hours || !train.contiguous()) {
            throw InvalidInput("sensor '" + data[i].sensor_id +
                               "' lacks a complete training window before " +
                               format_iso_hour(train_end));
        }
        ForecastOptions local = options;
        local.gp.seed = options.gp.seed ^ static_cast<std::uint64_t>(i);
        out[i] = forecast_sensor(train, horizon, local);
    });
    return out;
}

}  // namespace netscan
