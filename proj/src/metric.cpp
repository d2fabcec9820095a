#include "netscan/metric.hpp"

#include <cmath>

#include <fmt/format.h>

#include "netscan/error.hpp"

namespace netscan {

const char* to_string(Metric m) { return m == Metric::ebp ? "ebp" : "asym"; }

const char* to_string(BoundMode m) {
    switch (m) {
        case BoundMode::mean: return "mean";
        case BoundMode::upper: return "upper";
        case BoundMode::lower: return "lower";
    }
    return "mean";
}

const char* to_string(ScoreScale s) { return s == ScoreScale::log ? "log" : "raw"; }

Metric metric_from_string(const std::string& text) {
    if (text == "ebp") return Metric::ebp;
    if (text == "asym") return Metric::asym;
    throw InvalidInput("unknown metric '" + text + "' (expected ebp or asym)");
}

BoundMode bound_mode_from_string(const std::string& text) {
    if (text == "mean") return BoundMode::mean;
    if (text == "upper") return BoundMode::upper;
    if (text == "lower") return BoundMode::lower;
    throw InvalidInput("unknown bound mode '" + text + "' (expected mean, upper or lower)");
}

ScoreScale score_scale_from_string(const std::string& text) {
    if (text == "log") return ScoreScale::log;
    if (text == "raw") return ScoreScale::raw;
    throw InvalidInput("unknown score scale '" + text + "' (expected log or raw)");
}

double RegionAggregates::selected(BoundMode mode) const {
    switch (mode) {
        case BoundMode::mean: return baseline;
        case BoundMode::upper: return baseline_upper;
        case BoundMode::lower: return baseline_lower;
    }
    return baseline;
}

double poisson_llr(double count, double baseline) {
    if (!(baseline > 0.0) || !std::isfinite(baseline)) {
        throw ContractViolation(fmt::format("baseline must be positive and finite (got {})", baseline));
    }
    if (!(count >= 0.0) || !std::isfinite(count)) {
        throw ContractViolation(fmt::format("count must be non-negative and finite (got {})", count));
    }
    if (count == 0.0) return baseline;
    const double ratio = count / baseline;
    double llr;
    if (std::abs(ratio - 1.0) < 0.5) {
        // B (x ln x - x + 1) with x = C/B, accurate near x = 1.
        const double d = ratio - 1.0;
        llr = baseline * (ratio * std::log1p(d) - d);
    } else {
        llr = count * std::log(ratio) + baseline - count;
    }
    return llr > 0.0 ? llr : 0.0;
}

MetricValue ebp_score(const RegionAggregates& agg, BoundMode mode) {
    const double b = agg.selected(mode);
    const double c = agg.count;
    MetricValue v;
    const double llr = poisson_llr(c, b);
    if (c <= b) return v;
    v.log_raw = llr;
    v.raw = std::exp(llr);
    v.saturated = std::isinf(v.raw);
    return v;
}

MetricValue asym_score(const RegionAggregates& agg, BoundMode mode) {
    const double b = agg.selected(mode);
    const double c = agg.count;
    const double llr = poisson_llr(c, b);
    MetricValue v;
    if (c == b) {
        v.raw = 0.0;
        v.log_raw = 0.0;
        return v;
    }
    const double sign = c > b ? 1.0 : -1.0;
    v.log_raw = sign * llr;
    v.raw = sign * std::expm1(llr);
    v.saturated = std::isinf(v.raw);
    return v;
}

MetricValue score_metric(Metric metric, const RegionAggregates& agg, BoundMode mode) {
    return metric == Metric::ebp ? ebp_score(agg, mode) : asym_score(agg, mode);
}

}  // namespace netscan
