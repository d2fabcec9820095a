#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "netscan/metric.hpp"

namespace netscan {

enum class ScanType { planar, network };

// "PL" / "NET"
const char* to_string(ScanType t);
ScanType scan_type_from_string(const std::string& text);

constexpr std::size_t min_null_samples = 20;

// Daily maximum scores of surge-free scans, on the scale used for ranking.
struct NullDistribution {
    ScanType scan_type = ScanType::planar;
    Metric metric = Metric::ebp;
    std::vector<double> samples;  // one per evaluation day, in day order

    std::size_t count() const { return samples.size(); }
    // Throws CalibrationError with fewer than min_null_samples samples.
    double threshold(double percentile = 99.0) const;
};

// score - threshold(percentile); positive means alarm.
double corrected_score(double score, const NullDistribution& null, double percentile = 99.0);

}  // namespace netscan
