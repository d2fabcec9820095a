#include "netscan/pipeline.hpp"

#include <spdlog/spdlog.h>

#include "netscan/error.hpp"
#include "netscan/parallel.hpp"

namespace netscan {

const std::vector<SpatialRegion>& ScanSetup::regions(ScanType type) const {
    if (type == ScanType::planar) {
        if (!planar) throw InvalidInput("planar scan needs a boundary");
        return planar->regions;
    }
    if (!network) throw InvalidInput("network scan needs a road network");
    return network->regions;
}

ScanSetup make_scan_setup(const std::vector<SensorPlacement>& sensors, const Boundary* boundary,
                          const RoadNetwork* network, const ScanConfig& config) {
    ScanSetup setup;
    for (const auto& s : sensors) {
        setup.sensor_ids.push_back(s.id);
        setup.positions.push_back(s.position);
    }
    if (boundary) {
        PlanarGrid grid = build_grid(*boundary, config.grid_n);
        std::size_t outside = 0;
        for (const auto& cell : assign_cells(grid, setup.positions)) outside += cell ? 0 : 1;
        if (outside > 0) spdlog::info("{} sensors outside the grid box are excluded from PL scans", outside);
        auto rectangles = enumerate_rectangles(grid, setup.positions, config.max_rect_side);
        auto regions = planar_regions(grid, rectangles);
        spdlog::debug("PL: {} rectangles, {} with sensors", rectangles.size(), regions.size());
        setup.planar.emplace(PlanarSetup{std::move(grid), std::move(regions), outside});
    }
    if (network) {
        NetworkSetup net;
        net.segments = segment_network(*network, config.segment_m);
        net.placements = snap_sensors(sensors, net.segments, config.snap_tolerance_deg);
        for (const auto& p : net.placements) net.unsnapped += p.snapped() ? 0 : 1;
        if (net.unsnapped > 0) {
            spdlog::info("{} sensors farther than {} degrees from the network are excluded from NET scans",
                         net.unsnapped, config.snap_tolerance_deg);
        }
        const auto paths = enumerate_paths(net.segments, config.paths);
        net.path_count = paths.size();
        const SegmentSensorIndex index(net.placements, net.segments.size());
        net.regions = network_regions(paths, index, config.directions);
        spdlog::debug("NET: {} segments, {} paths, {} regions with sensors", net.segments.size(),
                      paths.size(), net.regions.size());
        setup.network = std::move(net);
    }
    return setup;
}

std::vector<TimeWindow> scan_windows(Hour end, const ScanConfig& config) {
    return enumerate_windows(end - config.windows.max_length + 1, end, config.windows);
}

std::optional<RegionScore> top_of_period(const ScanSetup& setup, ScanType type,
                                         const std::vector<ForecastSeries>& forecasts,
                                         const std::vector<SensorSeries>& actuals, Hour end,
                                         const ScanConfig& config) {
    const Hour first = end - config.windows.max_length + 1;
    const ScanFrame frame(setup.sensor_ids, forecasts, actuals, first, end);
    return scan_top(setup.regions(type), scan_windows(end, config), frame, config.options);
}

namespace {

Hour lead_days(const ScanConfig& scan) {
    const Hour w = scan.windows.max_length;
    return (w + hours_per_day - 1) / hours_per_day - 1;
}

}  // namespace

int calibration_days_total(const CalibrationConfig& config, const ScanConfig& scan) {
    return config.train_days + static_cast<int>(lead_days(scan)) + config.n_days;
}

std::vector<NullDistribution> calibrate_null(const std::vector<SensorSeries>& data,
                                             const ScanSetup& setup,
                                             const std::vector<ScanType>& types,
                                             const ScanConfig& scan,
                                             const CalibrationConfig& config) {
    if (data.empty()) throw CalibrationError("no surge-free data to calibrate on");
    if (config.n_days < 1) throw CalibrationError("calibration needs at least one day");
    for (ScanType t : types) setup.regions(t);

    const Hour start = data.front().hours.front();
    const Hour train_hours = static_cast<Hour>(config.train_days) * hours_per_day;
    const Hour first_end =
        start + (static_cast<Hour>(config.train_days) + lead_days(scan) + 1) * hours_per_day - 1;
    const auto days = static_cast<std::size_t>(config.n_days);

    std::vector<std::vector<double>> maxima(types.size(), std::vector<double>(days));
    parallel_for(days, config.threads, [&](std::size_t j) {
        const Hour end = first_end + static_cast<Hour>(j) * hours_per_day;
        const Hour window_start = end - scan.windows.max_length + 1;
        try {
            const auto forecasts =
                forecast_all(data, window_start, train_hours, end + 1, config.forecast, 1);
            for (std::size_t t = 0; t < types.size(); ++t) {
                const auto top = top_of_period(setup, types[t], forecasts, data, end, scan);
                if (!top) throw CalibrationError("no region could be scored");
                maxima[t][j] = top->score(scan.options.scale);
            }
        } catch (const std::exception& e) {
            throw CalibrationError("calibration day " + std::to_string(j) + " (" +
                                   format_iso_hour(end) + ") failed: " + e.what());
        }
    });

    std::vector<NullDistribution> out;
    for (std::size_t t = 0; t < types.size(); ++t) {
        out.push_back({types[t], scan.options.metric, std::move(maxima[t])});
    }
    return out;
}

}  // namespace netscan
