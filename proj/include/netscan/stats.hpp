#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace netscan {

// Nearest-rank percentile: the sorted sample at rank min(n, floor(p n / 100) + 1).
// p = 100 gives the maximum. Throws InvalidInput on an empty sample or p
// outside [0, 100].
double nearest_rank_percentile(std::span<const double> samples, double percentile);

double mean_of(std::span<const double> values);

struct Interval {
    double low = 0.0;
    double high = 0.0;
};

// Percentile bootstrap interval of the mean.
Interval bootstrap_mean_interval(std::span<const double> values, double level,
                                 std::size_t resamples, std::uint64_t seed);

// SplitMix64 finalizer, used to derive independent seeds from one.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace netscan
