#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "netscan/forecast.hpp"
#include "netscan/grid.hpp"
#include "netscan/network.hpp"
#include "netscan/null_distribution.hpp"
#include "netscan/scan.hpp"

namespace netscan {

struct ScanConfig {
    ScanOptions options;
    int grid_n = 8;
    int max_rect_side = 0;  // 0 = unlimited
    WindowFamily windows;
    PathEnumerationOptions paths;
    double segment_m = 100.0;
    double snap_tolerance_deg = 5e-4;
    DirectionMode directions = DirectionMode::undirected;
    double percentile = 99.0;
};

struct PlanarSetup {
    PlanarGrid grid;
    std::vector<SpatialRegion> regions;
    std::size_t outside = 0;  // sensors outside the bounding box
};

struct NetworkSetup {
    std::vector<Segment> segments;
    std::vector<SensorPlacement> placements;
    std::vector<SpatialRegion> regions;
    std::size_t path_count = 0;
    std::size_t unsnapped = 0;
};

// Spatial search regions of one or both scan types over a fixed sensor
// list. Region members index `sensor_ids`.
struct ScanSetup {
    std::vector<std::string> sensor_ids;
    std::vector<LonLat> positions;
    std::optional<PlanarSetup> planar;
    std::optional<NetworkSetup> network;

    // Throws InvalidInput when the scan type was not set up.
    const std::vector<SpatialRegion>& regions(ScanType type) const;
};

// Pass a null boundary or network to skip that scan type.
ScanSetup make_scan_setup(const std::vector<SensorPlacement>& sensors, const Boundary* boundary,
                          const RoadNetwork* network, const ScanConfig& config);

// Windows ending at `end` under the configured family, starting no earlier
// than end - W + 1.
std::vector<TimeWindow> scan_windows(Hour end, const ScanConfig& config);

// Highest-scoring region of the scan period ending at `end`.
std::optional<RegionScore> top_of_period(const ScanSetup& setup, ScanType type,
                                         const std::vector<ForecastSeries>& forecasts,
                                         const std::vector<SensorSeries>& actuals, Hour end,
                                         const ScanConfig& config);

struct CalibrationConfig {
    int n_days = 101;
    int train_days = 21;
    ForecastOptions forecast;
    int threads = 1;
};

// Days of surge-free data that yield n_days evaluation days: the training
// span, the days before the first window end, then one per sample.
int calibration_days_total(const CalibrationConfig& config, const ScanConfig& scan);

// For each sliding evaluation day, forecasts the scan period from the
// preceding training span and records the maximum score of each scan type.
// Any failing day aborts with CalibrationError.
std::vector<NullDistribution> calibrate_null(const std::vector<SensorSeries>& data,
                                             const ScanSetup& setup,
                                             const std::vector<ScanType>& types,
                                             const ScanConfig& scan,
                                             const CalibrationConfig& config);

}  // namespace netscan
