#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netscan/geo.hpp"
#include "netscan/network.hpp"
#include "netscan/series.hpp"

namespace netscan {

// Jittered street lattice with sensors scattered along it.
struct WorldConfig {
    BoundingBox box{-0.19, 51.49, -0.14, 51.515};
    int columns = 4;  // north-south streets
    int rows = 3;     // east-west streets
    double jitter = 0.15;  // of the lattice spacing, interior vertices only
    double margin = 0.05;  // of the box size, between the boundary and the outer streets
    int sensors = 100;
    double off_network_fraction = 0.15;
    double on_network_offset_deg = 3e-4;   // max distance of a placed sensor from its street
    double off_network_min_deg = 1e-3;     // min distance of an off-network sensor
    bool directions = false;
};

struct SyntheticWorld {
    Boundary boundary;
    std::vector<EdgeInput> edges;
    std::vector<SensorPlacement> sensors;  // unsnapped
};

SyntheticWorld make_world(const WorldConfig& config, std::uint64_t seed);

struct SimConfig {
    Hour start = 0;
    int days_total = 122;
    int train_days = 21;
    double daily_amplitude = 0.5;
    double weekly_amplitude = 0.2;
    double base_min = 5.0;   // counts/hour, log-uniform when no base is given
    double base_max = 100.0;
    std::map<std::string, double> bases;  // per-sensor override
    double min_mean = 0.1;
};

SimConfig default_sim_config();

struct SensorProfile {
    std::string sensor_id;
    double base = 0.0;
    double daily_phase = 0.0;
    double weekly_phase = 0.0;
};

// Bases and phases, fixed by the seed.
std::vector<SensorProfile> draw_profiles(const std::vector<std::string>& sensor_ids,
                                         const SimConfig& config, std::uint64_t seed);

// m(t) = base (1 + a_d sin(2 pi t / 24 + phi)) (1 + a_w sin(2 pi t / 168 + psi)),
// clipped below, with t in hours since the start.
double expected_count(const SensorProfile& profile, const SimConfig& config, Hour hour);

// Poisson counts for every sensor over days_total days. `realization`
// selects an independent noise draw for the same profiles.
std::vector<SensorSeries> generate_surge_free(const std::vector<SensorProfile>& profiles,
                                              const SimConfig& config, std::uint64_t seed,
                                              std::uint64_t realization = 0);

// Nearest-rank 90th percentile of observed values, the base of a sensor
// calibrated from real data.
double empirical_base(std::span<const double> values);

struct SurgeOptions {
    int k_min = 10;
    int k_max = 100;
    int days = 3;
    double cap = 4.0;
    double max_rate = 1.0;  // omega of the busiest affected sensor
};

struct SurgeSpec {
    LonLat epicentre;
    std::vector<std::size_t> affected;  // sensor indices, nearest first
    std::vector<double> omega;          // parallel to `affected`
    Hour first_hour = 0;                // start of outbreak day 1
    int days = 3;
    double cap = 4.0;
};

// min(1 + omega t, cap) for outbreak day t = 1, 2, ...
double surge_factor(double omega, int day, double cap);

// Epicentre uniform in the boundary, k uniform in [k_min, k_max] (clamped to
// the sensor count), the k nearest sensors by degree distance. The surge
// covers the final `days` days of the data.
SurgeSpec draw_surge(const std::vector<LonLat>& positions,
                     const std::vector<SensorProfile>& profiles, const Boundary& boundary,
                     const SimConfig& config, const SurgeOptions& options, std::uint64_t seed);

// Redraws the affected sensors' outbreak-day counts from Poisson(lambda m).
// Other sensors and hours are untouched.
std::vector<SensorSeries> inject_surge(const std::vector<SensorSeries>& data,
                                       const std::vector<SensorProfile>& profiles,
                                       const SimConfig& config, const SurgeSpec& spec,
                                       std::uint64_t seed);

}  // namespace netscan
