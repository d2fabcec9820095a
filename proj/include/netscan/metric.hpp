#pragma once

#include <string>

namespace netscan {

enum class Metric { ebp, asym };
enum class BoundMode { mean, upper, lower };
// Scale on which scores are ranked, thresholded and averaged. Both are
// monotone in each other; `log` stays finite where the raw ratio overflows.
enum class ScoreScale { log, raw };

const char* to_string(Metric m);
const char* to_string(BoundMode m);
const char* to_string(ScoreScale s);
Metric metric_from_string(const std::string& text);
BoundMode bound_mode_from_string(const std::string& text);
ScoreScale score_scale_from_string(const std::string& text);

struct RegionAggregates {
    double baseline = 0.0;  // B_S
    double count = 0.0;     // C_S
    double baseline_upper = 0.0;
    double baseline_lower = 0.0;

    double selected(BoundMode mode) const;
};

struct MetricValue {
    double raw = 1.0;
    double log_raw = 0.0;
    bool saturated = false;  // raw overflowed to +/-inf

    double on(ScoreScale scale) const { return scale == ScoreScale::log ? log_raw : raw; }
};

// C ln(C/B) + B - C, the log of the Poisson likelihood ratio at q = C/B.
// Zero at C == B and non-negative everywhere. Requires B > 0, C >= 0.
double poisson_llr(double count, double baseline);

// (C/B)^C e^(B-C) when C > B, else exactly 1. log_raw is the log of that.
MetricValue ebp_score(const RegionAggregates& agg, BoundMode mode = BoundMode::mean);

// Signed: F - 1 when C >= B, 1 - F when C < B, where F is the likelihood
// ratio at the unconstrained maximizer q = C/B. log_raw carries the signed
// log ratio sign(C - B) * poisson_llr(C, B).
MetricValue asym_score(const RegionAggregates& agg, BoundMode mode = BoundMode::mean);

MetricValue score_metric(Metric metric, const RegionAggregates& agg, BoundMode mode);

}  // namespace netscan
