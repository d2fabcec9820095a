#include "netscan/null_distribution.hpp"

#include <fmt/format.h>

#include "netscan/error.hpp"
#include "netscan/stats.hpp"

namespace netscan {

const char* to_string(ScanType t) { return t == ScanType::planar ? "PL" : "NET"; }

ScanType scan_type_from_string(const std::string& text) {
    if (text == "PL" || text == "pl") return ScanType::planar;
    if (text == "NET" || text == "net") return ScanType::network;
    throw InvalidInput("unknown scan type '" + text + "' (expected PL or NET)");
}

double NullDistribution::threshold(double percentile) const {
    if (samples.size() < min_null_samples) {
        throw CalibrationError(fmt::format(
            "null distribution for {} {} has {} samples; at least {} are needed",
            to_string(scan_type), to_string(metric), samples.size(), min_null_samples));
    }
    return nearest_rank_percentile(samples, percentile);
}

double corrected_score(double score, const NullDistribution& null, double percentile) {
    return score - null.threshold(percentile);
}

}  // namespace netscan
