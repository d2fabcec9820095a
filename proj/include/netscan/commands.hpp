#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "netscan/config.hpp"

namespace netscan {

// Subcommands. Each reads and writes only the documented artifacts and
// throws netscan::Error on failure; outputs are replaced atomically.

struct SimulateArgs {
    bool surge = false;     // inject a surge into the final days
    std::string empirical;  // counts CSV whose 90th percentiles set sensor bases
};
// Writes sensors.csv, network.geojson, boundary.geojson, counts.csv and,
// with a surge, surge.csv into the output directory.
void cmd_simulate(const RunConfig& config, const SimulateArgs& args);

struct ForecastArgs {
    std::optional<Hour> train_end;  // default: train_days after the first count
};
void cmd_forecast(const RunConfig& config, const ForecastArgs& args);

struct ScanArgs {
    std::optional<Hour> window_end;  // default: last forecast hour
    std::size_t top = 0;             // rows per scan type, 0 = all
};
void cmd_scan(const RunConfig& config, const ScanArgs& args);

// Writes null.csv and thresholds.csv.
void cmd_calibrate(const RunConfig& config);

// Writes results.csv, report.txt and summary.json.
void cmd_evaluate(const RunConfig& config);

// Writes heatmap_pl.geojson and/or heatmap_net.geojson.
void cmd_heatmap(const RunConfig& config);

}  // namespace netscan
