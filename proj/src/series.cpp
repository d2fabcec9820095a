#include "netscan/series.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include <fmt/format.h>

#include "netscan/error.hpp"
#include "netscan/stats.hpp"

namespace netscan {

bool SensorSeries::contiguous() const {
    for (std::size_t i = 1; i < hours.size(); ++i) {
        if (hours[i] != hours[i - 1] + 1) return false;
    }
    return true;
}

SensorSeries SensorSeries::slice(Hour from, Hour to) const {
    SensorSeries out;
    out.sensor_id = sensor_id;
    const auto lo = std::lower_bound(hours.begin(), hours.end(), from);
    const auto hi = std::lower_bound(hours.begin(), hours.end(), to);
    const auto a = static_cast<std::size_t>(lo - hours.begin());
    const auto b = static_cast<std::size_t>(hi - hours.begin());
    out.hours.assign(hours.begin() + static_cast<std::ptrdiff_t>(a),
                     hours.begin() + static_cast<std::ptrdiff_t>(b));
    out.counts.assign(counts.begin() + static_cast<std::ptrdiff_t>(a),
                      counts.begin() + static_cast<std::ptrdiff_t>(b));
    return out;
}

ForecastSeries make_forecast(std::string sensor_id, Hour first_hour, std::vector<double> mean,
                             std::vector<double> std, double sigma_k) {
    if (std.size() != mean.size()) throw ContractViolation("forecast mean/std length mismatch");
    ForecastSeries f;
    f.sensor_id = std::move(sensor_id);
    const std::size_t n = mean.size();
    f.hours.resize(n);
    f.lower.resize(n);
    f.upper.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        f.hours[i] = first_hour + static_cast<Hour>(i);
        if (!std::isfinite(mean[i])) mean[i] = baseline_floor;
        mean[i] = std::max(mean[i], baseline_floor);
        std[i] = std::isfinite(std[i]) ? std::max(std[i], 0.0) : 0.0;
        f.upper[i] = mean[i] + sigma_k * std[i];
        f.lower[i] = std::max(mean[i] - sigma_k * std[i], baseline_floor);
    }
    f.mean = std::move(mean);
    f.std = std::move(std);
    return f;
}

PreprocessResult preprocess(const SensorSeries& series, const PreprocessOptions& options) {
    if (series.empty()) return Rejection{Rejection::Reason::empty, "series has no observations"};

    const Hour first = series.hours.front();
    const Hour span = series.hours.back() - first + 1;
    const double coverage = static_cast<double>(series.size()) / static_cast<double>(span);
    if (coverage < options.min_coverage) {
        return Rejection{Rejection::Reason::coverage,
                         fmt::format("coverage {:.3f} below minimum {:.3f}", coverage,
                                     options.min_coverage)};
    }

    std::vector<double> as_double(series.counts.begin(), series.counts.end());
    const double p99 = nearest_rank_percentile(as_double, 99.0);
    const double anomaly_limit = options.anomaly_multiple * p99;

    std::vector<std::optional<double>> filled(static_cast<std::size_t>(span));
    for (std::size_t i = 0; i < series.size(); ++i) {
        const double v = static_cast<double>(series.counts[i]);
        if (p99 > 0.0 && v > anomaly_limit) continue;
        filled[static_cast<std::size_t>(series.hours[i] - first)] = v;
    }

    const std::size_t n = filled.size();
    std::size_t i = 0;
    while (i < n) {
        if (filled[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n && !filled[j]) ++j;
        const auto gap = static_cast<Hour>(j - i);
        if (gap > options.max_gap_hours) {
            return Rejection{Rejection::Reason::gap,
                             fmt::format("gap of {} hours starting {} exceeds maximum {}", gap,
                                         format_iso_hour(first + static_cast<Hour>(i)),
                                         options.max_gap_hours)};
        }
        const std::optional<double> left = i > 0 ? filled[i - 1] : std::nullopt;
        const std::optional<double> right = j < n ? filled[j] : std::nullopt;
        if (!left && !right) {
            return Rejection{Rejection::Reason::empty, "no usable observations"};
        }
        for (std::size_t k = i; k < j; ++k) {
            double v;
            if (left && right) {
                const double t = static_cast<double>(k - i + 1) / static_cast<double>(j - i + 1);
                v = *left + t * (*right - *left);
            } else {
                v = left ? *left : *right;
            }
            filled[k] = static_cast<double>(std::lround(v));
        }
        i = j;
    }

    SensorSeries out;
    out.sensor_id = series.sensor_id;
    out.hours.resize(n);
    out.counts.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.hours[k] = first + static_cast<Hour>(k);
        out.counts[k] = static_cast<std::int64_t>(*filled[k]);
    }
    return out;
}

}  // namespace netscan
