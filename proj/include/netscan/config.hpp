#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "netscan/forecast.hpp"
#include "netscan/null_distribution.hpp"
#include "netscan/pipeline.hpp"
#include "netscan/series.hpp"
#include "netscan/simulate.hpp"

namespace netscan {

struct RunPaths {
    std::string counts;
    std::string sensors;
    std::string network;
    std::string boundary;
    std::string forecasts;
    std::string scores;
    std::string null;
    std::string output_dir = ".";
};

// Every knob of every subcommand. Defaults follow the paper's setup.
struct RunConfig {
    std::uint64_t seed = 0;
    int threads = 1;
    RunPaths paths;

    ForecastOptions forecast;
    int train_days = 21;
    Hour horizon_hours = 48;
    PreprocessOptions preprocess;

    ScanConfig scan;
    std::vector<ScanType> scan_types{ScanType::planar, ScanType::network};

    WorldConfig world;
    SimConfig sim = default_sim_config();
    SurgeOptions surge;
    int null_days = 101;

    int trials = 20;
    std::vector<ForecastMethod> methods{ForecastMethod::holt_winters};
    double confidence = 0.95;
    std::size_t bootstrap_resamples = 2000;
    bool record_timings = true;
};

// Reads an INI file over the defaults. Unknown sections or keys and
// unparsable or out-of-range values throw ConfigError.
RunConfig load_config(const std::string& path);

// Applies one "section.key = value" setting.
void set_config_value(RunConfig& config, const std::string& key, const std::string& value);

// Range checks shared by load_config and command-line overrides.
void validate_config(const RunConfig& config);

// Fully resolved configuration as INI text, loadable by load_config.
std::string dump_config(const RunConfig& config);

}  // namespace netscan
