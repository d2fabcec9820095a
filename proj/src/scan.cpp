#include "netscan/scan.hpp"

#include <algorithm>
#include <unordered_map>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "netscan/error.hpp"

namespace netscan {

std::vector<SpatialRegion> planar_regions(const PlanarGrid& grid,
                                          const std::vector<GridRectangle>& rectangles) {
    std::vector<SpatialRegion> out;
    const int n = grid.resolution();
    for (const auto& r : rectangles) {
        if (r.members.empty()) continue;
        SpatialRegion s;
        s.key = r.key();
        s.members = r.members;
        for (int y = r.y0; y <= r.y1; ++y) {
            for (int x = r.x0; x <= r.x1; ++x) s.footprint.push_back(static_cast<std::size_t>(y * n + x));
        }
        s.extent = r.cell_count();
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<SpatialRegion> network_regions(const std::vector<SegmentPath>& paths,
                                           const SegmentSensorIndex& index, DirectionMode mode) {
    std::vector<SpatialRegion> out;
    for (const auto& path : paths) {
        const PathMembers m = index.members(path);
        if (m.undirected.empty()) continue;
        auto add = [&](Direction d) {
            const auto& members = m.get(d);
            if (members.empty()) return;
            SpatialRegion s;
            s.key = path.key();
            s.direction = d;
            s.members = members;
            s.footprint.assign(path.canonical.begin(), path.canonical.end());
            s.extent = path.length_m;
            out.push_back(std::move(s));
        };
        if (mode != DirectionMode::directed) add(Direction::undirected);
        if (mode != DirectionMode::undirected) {
            add(Direction::forward);
            add(Direction::reverse);
        }
    }
    return out;
}

std::vector<TimeWindow> enumerate_windows(Hour first, Hour last, const WindowFamily& family) {
    if (last < first) throw InvalidInput("empty scan period");
    if (family.max_length < 1 || family.stride < 1) {
        throw InvalidInput("window length and stride must be at least one hour");
    }
    std::vector<TimeWindow> out;
    const Hour span = last - first + 1;
    const Hour max_len = std::min(family.max_length, span);
    if (!family.all_windows) {
        for (Hour len = family.stride; len <= max_len; len += family.stride) {
            out.push_back({last - len + 1, last});
        }
        return out;
    }
    for (Hour end = first; end <= last; ++end) {
        const Hour limit = std::min(max_len, end - first + 1);
        for (Hour len = family.stride; len <= limit; len += family.stride) {
            out.push_back({end - len + 1, end});
        }
    }
    return out;
}

ScanFrame::ScanFrame(const std::vector<std::string>& sensor_ids,
                     const std::vector<ForecastSeries>& forecasts,
                     const std::vector<SensorSeries>& actuals, Hour first, Hour last)
    : ids_(sensor_ids), first_(first), last_(last) {
    if (last < first) throw InvalidInput("empty scan period");
    std::unordered_map<std::string, const ForecastSeries*> forecast_of;
    for (const auto& f : forecasts) forecast_of.emplace(f.sensor_id, &f);
    std::unordered_map<std::string, const SensorSeries*> actual_of;
    for (const auto& a : actuals) actual_of.emplace(a.sensor_id, &a);

    const auto n = static_cast<std::size_t>(last - first + 1);
    prefix_.resize(ids_.size());
    for (std::size_t s = 0; s < ids_.size(); ++s) {
        Prefix& p = prefix_[s];
        p.count.assign(n + 1, 0.0);
        p.mean.assign(n + 1, 0.0);
        p.upper.assign(n + 1, 0.0);
        p.lower.assign(n + 1, 0.0);
        p.missing.assign(n + 1, 0);

        std::vector<char> have(n, 0);
        std::vector<double> c(n, 0.0), b(n, 0.0), up(n, 0.0), lo(n, 0.0);
        const auto fit = forecast_of.find(ids_[s]);
        const auto ait = actual_of.find(ids_[s]);
        if (fit != forecast_of.end() && ait != actual_of.end()) {
            const ForecastSeries& f = *fit->second;
            for (std::size_t i = 0; i < f.size(); ++i) {
                if (f.hours[i] < first || f.hours[i] > last) continue;
                const auto k = static_cast<std::size_t>(f.hours[i] - first);
                have[k] = 1;
                b[k] = f.mean[i];
                up[k] = f.upper[i];
                lo[k] = f.lower[i];
            }
            std::vector<char> counted(n, 0);
            const SensorSeries& a = *ait->second;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a.hours[i] < first || a.hours[i] > last) continue;
                const auto k = static_cast<std::size_t>(a.hours[i] - first);
                counted[k] = 1;
                c[k] = static_cast<double>(a.counts[i]);
            }
            for (std::size_t k = 0; k < n; ++k) have[k] = static_cast<char>(have[k] && counted[k]);
        }
        for (std::size_t k = 0; k < n; ++k) {
            p.count[k + 1] = p.count[k] + (have[k] ? c[k] : 0.0);
            p.mean[k + 1] = p.mean[k] + (have[k] ? b[k] : 0.0);
            p.upper[k + 1] = p.upper[k] + (have[k] ? up[k] : 0.0);
            p.lower[k + 1] = p.lower[k] + (have[k] ? lo[k] : 0.0);
            p.missing[k + 1] = p.missing[k] + (have[k] ? 0 : 1);
        }
    }
}

std::optional<RegionAggregates> ScanFrame::aggregate(std::span<const std::size_t> members,
                                                     const TimeWindow& window) const {
    if (window.start < first_ || window.end > last_ || window.end < window.start) {
        throw ContractViolation("time window outside the scan period");
    }
    const auto s = static_cast<std::size_t>(window.start - first_);
    const auto e = static_cast<std::size_t>(window.end - first_) + 1;
    RegionAggregates agg;
    for (std::size_t m : members) {
        const Prefix& p = prefix_[m];
        if (p.missing[e] != p.missing[s]) return std::nullopt;
        agg.count += p.count[e] - p.count[s];
        agg.baseline += p.mean[e] - p.mean[s];
        agg.baseline_upper += p.upper[e] - p.upper[s];
        agg.baseline_lower += p.lower[e] - p.lower[s];
    }
    return agg;
}

bool outranks(const RegionScore& a, const RegionScore& b,
              const std::vector<SpatialRegion>& spatial, ScoreScale scale) {
    const double sa = a.score(scale);
    const double sb = b.score(scale);
    if (sa != sb) return sa > sb;
    if (a.region.window.start != b.region.window.start) {
        return a.region.window.start < b.region.window.start;
    }
    const SpatialRegion& ra = spatial[a.region.spatial];
    const SpatialRegion& rb = spatial[b.region.spatial];
    if (ra.extent != rb.extent) return ra.extent < rb.extent;
    if (ra.key != rb.key) return ra.key < rb.key;
    if (ra.direction != rb.direction) return ra.direction < rb.direction;
    return a.region.window.end < b.region.window.end;
}

namespace {

std::optional<RegionScore> score_region(const std::vector<SpatialRegion>& spatial,
                                        const SpaceTimeRegion& region, const ScanFrame& frame,
                                        const ScanOptions& options, ScanStats& stats) {
    const auto agg = frame.aggregate(spatial[region.spatial].members, region.window);
    if (!agg) {
        ++stats.skipped;
        spdlog::debug("region {} [{}, {}] skipped: missing forecast or count hours",
                      spatial[region.spatial].key, format_iso_hour(region.window.start),
                      format_iso_hour(region.window.end));
        return std::nullopt;
    }
    ++stats.scored;
    RegionScore s;
    s.region = region;
    s.metric = options.metric;
    s.aggregates = *agg;
    s.value = score_metric(options.metric, *agg, options.bound);
    return s;
}

void report_skips(const ScanStats& stats) {
    if (stats.skipped > 0) {
        spdlog::warn("{} regions skipped for missing forecast or count hours ({} scored)",
                     stats.skipped, stats.scored);
    }
}

}  // namespace

std::vector<RegionScore> scan(const std::vector<SpatialRegion>& spatial,
                              const std::vector<SpaceTimeRegion>& regions, const ScanFrame& frame,
                              const ScanOptions& options, ScanStats* stats) {
    ScanStats local;
    std::vector<RegionScore> out;
    out.reserve(regions.size());
    for (const auto& r : regions) {
        if (r.spatial >= spatial.size()) throw ContractViolation("region references unknown spatial part");
        if (auto s = score_region(spatial, r, frame, options, local)) out.push_back(std::move(*s));
    }
    std::sort(out.begin(), out.end(), [&](const RegionScore& a, const RegionScore& b) {
        return outranks(a, b, spatial, options.scale);
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
    report_skips(local);
    if (stats) *stats = local;
    return out;
}

void scan_each(const std::vector<SpatialRegion>& spatial, const std::vector<TimeWindow>& windows,
               const ScanFrame& frame, const ScanOptions& options,
               const std::function<void(const RegionScore&)>& visit, ScanStats* stats) {
    ScanStats local;
    for (std::size_t i = 0; i < spatial.size(); ++i) {
        for (const auto& w : windows) {
            if (auto s = score_region(spatial, SpaceTimeRegion{i, w}, frame, options, local)) visit(*s);
        }
    }
    report_skips(local);
    if (stats) *stats = local;
}

std::optional<RegionScore> scan_top(const std::vector<SpatialRegion>& spatial,
                                    const std::vector<TimeWindow>& windows,
                                    const ScanFrame& frame, const ScanOptions& options,
                                    ScanStats* stats) {
    std::optional<RegionScore> best;
    scan_each(
        spatial, windows, frame, options,
        [&](const RegionScore& s) {
            if (!best || outranks(s, *best, spatial, options.scale)) best = s;
        },
        stats);
    if (best) best->rank = 1;
    return best;
}

std::optional<RegionScore> top_region(const std::vector<RegionScore>& scores,
                                      const std::vector<SpatialRegion>& spatial,
                                      ScoreScale scale) {
    if (scores.empty()) return std::nullopt;
    const RegionScore* best = &scores.front();
    for (const auto& s : scores) {
        if (outranks(s, *best, spatial, scale)) best = &s;
    }
    return *best;
}

HeatmapAccumulator::HeatmapAccumulator(std::size_t footprint_size, ScoreScale scale)
    : scale_(scale), sum_(footprint_size, 0.0), count_(footprint_size, 0) {}

void HeatmapAccumulator::add(const SpatialRegion& region, double score) {
    for (std::size_t f : region.footprint) {
        if (f >= sum_.size()) throw ContractViolation("heatmap footprint index out of range");
        sum_[f] += score;
        ++count_[f];
    }
}

void HeatmapAccumulator::add(const RegionScore& score, const std::vector<SpatialRegion>& spatial) {
    add(spatial[score.region.spatial], score.score(scale_));
}

std::vector<std::optional<double>> HeatmapAccumulator::means() const {
    std::vector<std::optional<double>> out(sum_.size());
    for (std::size_t i = 0; i < sum_.size(); ++i) {
        if (count_[i] > 0) out[i] = sum_[i] / static_cast<double>(count_[i]);
    }
    return out;
}

std::vector<std::optional<double>> heatmap(const std::vector<RegionScore>& scores,
                                           const std::vector<SpatialRegion>& spatial,
                                           std::size_t footprint_size, ScoreScale scale) {
    HeatmapAccumulator acc(footprint_size, scale);
    for (const auto& s : scores) acc.add(s, spatial);
    return acc.means();
}

}  // namespace netscan
