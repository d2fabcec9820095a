#include "netscan/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "netscan/error.hpp"

namespace netscan {

double nearest_rank_percentile(std::span<const double> samples, double percentile) {
    if (samples.empty()) throw InvalidInput("percentile of an empty sample");
    if (!(percentile >= 0.0 && percentile <= 100.0)) {
        throw InvalidInput("percentile must lie in [0, 100]");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    // The small offset keeps exact products such as 99 * 101 / 100 from
    // rounding down.
    const auto rank = static_cast<std::size_t>(std::floor(percentile * n / 100.0 + 1e-9)) + 1;
    return sorted[std::min(rank, sorted.size()) - 1];
}

double mean_of(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

Interval bootstrap_mean_interval(std::span<const double> values, double level,
                                 std::size_t resamples, std::uint64_t seed) {
    if (values.empty()) return {};
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
    std::vector<double> means(resamples);
    for (auto& m : means) {
        double sum = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) sum += values[pick(rng)];
        m = sum / static_cast<double>(values.size());
    }
    const double tail = (1.0 - level) / 2.0 * 100.0;
    return {nearest_rank_percentile(means, tail), nearest_rank_percentile(means, 100.0 - tail)};
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace netscan
