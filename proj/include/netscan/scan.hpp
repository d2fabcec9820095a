#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netscan/grid.hpp"
#include "netscan/metric.hpp"
#include "netscan/network.hpp"
#include "netscan/series.hpp"

namespace netscan {

// Spatial part of a search region. Members index the sensor list the scan
// frame was built from; the footprint lists grid cells (iy * N + ix) or
// segment ids for heatmaps.
struct SpatialRegion {
    std::string key;
    Direction direction = Direction::undirected;
    std::vector<std::size_t> members;
    std::vector<std::size_t> footprint;
    double extent = 0.0;  // cells for rectangles, metres for paths
};

// Rectangles with at least one member. Members are the rectangle's own
// sensor indices.
std::vector<SpatialRegion> planar_regions(const PlanarGrid& grid,
                                          const std::vector<GridRectangle>& rectangles);

enum class DirectionMode { undirected, directed, both };

// Paths with at least one member. `directed` yields a forward and a reverse
// region per path; `both` adds the undirected one too.
std::vector<SpatialRegion> network_regions(const std::vector<SegmentPath>& paths,
                                           const SegmentSensorIndex& index, DirectionMode mode);

struct TimeWindow {
    Hour start = 0;  // inclusive
    Hour end = 0;    // inclusive

    Hour length() const { return end - start + 1; }
    friend bool operator==(const TimeWindow&, const TimeWindow&) = default;
};

struct WindowFamily {
    Hour max_length = 48;  // W
    Hour stride = 1;       // window lengths are multiples of this
    bool all_windows = false;
};

// Windows inside [first, last]. By default every window ends at `last` with
// length stride, 2 stride, ... up to max_length; `all_windows` also varies
// the end hour.
std::vector<TimeWindow> enumerate_windows(Hour first, Hour last, const WindowFamily& family);

struct SpaceTimeRegion {
    std::size_t spatial = 0;  // index into the spatial region list
    TimeWindow window;
};

// Per-sensor prefix sums of counts and baselines over [first, last].
class ScanFrame {
public:
    ScanFrame(const std::vector<std::string>& sensor_ids,
              const std::vector<ForecastSeries>& forecasts,
              const std::vector<SensorSeries>& actuals, Hour first, Hour last);

    Hour first() const { return first_; }
    Hour last() const { return last_; }
    std::size_t sensor_count() const { return ids_.size(); }
    const std::string& sensor_id(std::size_t i) const { return ids_[i]; }

    // Nullopt when a member lacks a forecast or a count for some hour.
    std::optional<RegionAggregates> aggregate(std::span<const std::size_t> members,
                                              const TimeWindow& window) const;

private:
    struct Prefix {
        std::vector<double> count, mean, upper, lower;
        std::vector<std::size_t> missing;
    };

    std::vector<std::string> ids_;
    Hour first_;
    Hour last_;
    std::vector<Prefix> prefix_;
};

struct ScanOptions {
    Metric metric = Metric::ebp;
    BoundMode bound = BoundMode::mean;
    ScoreScale scale = ScoreScale::log;
};

struct RegionScore {
    SpaceTimeRegion region;
    Metric metric = Metric::ebp;
    RegionAggregates aggregates;
    MetricValue value;
    std::optional<double> corrected;
    std::size_t rank = 0;  // 1-based after sorting

    double score(ScoreScale scale) const { return value.on(scale); }
};

// true when `a` ranks above `b`: higher score, then earlier window start,
// then smaller spatial extent, then smaller region key and direction.
bool outranks(const RegionScore& a, const RegionScore& b,
              const std::vector<SpatialRegion>& spatial, ScoreScale scale);

struct ScanStats {
    std::size_t scored = 0;
    std::size_t skipped = 0;  // regions with missing forecast or count hours
};

// Scores the given regions, sorted best first with ranks assigned. Regions
// whose members lack data are skipped and logged.
std::vector<RegionScore> scan(const std::vector<SpatialRegion>& spatial,
                              const std::vector<SpaceTimeRegion>& regions, const ScanFrame& frame,
                              const ScanOptions& options, ScanStats* stats = nullptr);

// Every spatial region crossed with every window, without materializing the
// result. The callback sees regions in spatial-major order.
void scan_each(const std::vector<SpatialRegion>& spatial, const std::vector<TimeWindow>& windows,
               const ScanFrame& frame, const ScanOptions& options,
               const std::function<void(const RegionScore&)>& visit, ScanStats* stats = nullptr);

// Best region of the full cross product, or nullopt when nothing scored.
std::optional<RegionScore> scan_top(const std::vector<SpatialRegion>& spatial,
                                    const std::vector<TimeWindow>& windows,
                                    const ScanFrame& frame, const ScanOptions& options,
                                    ScanStats* stats = nullptr);

// Highest-ranked score, nullopt for an empty list.
std::optional<RegionScore> top_region(const std::vector<RegionScore>& scores,
                                      const std::vector<SpatialRegion>& spatial,
                                      ScoreScale scale = ScoreScale::log);

// Mean score of the regions covering each footprint element; nullopt where
// no region covers it.
class HeatmapAccumulator {
public:
    HeatmapAccumulator(std::size_t footprint_size, ScoreScale scale);

    void add(const SpatialRegion& region, double score);
    void add(const RegionScore& score, const std::vector<SpatialRegion>& spatial);
    std::vector<std::optional<double>> means() const;

private:
    ScoreScale scale_;
    std::vector<double> sum_;
    std::vector<std::size_t> count_;
};

std::vector<std::optional<double>> heatmap(const std::vector<RegionScore>& scores,
                                           const std::vector<SpatialRegion>& spatial,
                                           std::size_t footprint_size,
                                           ScoreScale scale = ScoreScale::log);

}  // namespace netscan
