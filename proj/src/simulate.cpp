#include "netscan/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "netscan/error.hpp"
#include "netscan/stats.hpp"

namespace netscan {

namespace {

enum Stream : std::uint64_t { world_stream = 1, profile_stream, noise_stream, surge_stream, redraw_stream };

Polygon world_outline(const BoundingBox& b) {
    const double w = b.width();
    const double h = b.height();
    return Polygon{{{
        {b.min_lon, b.min_lat + 0.2 * h},
        {b.min_lon + 0.3 * w, b.min_lat},
        {b.max_lon, b.min_lat},
        {b.max_lon, b.max_lat - 0.2 * h},
        {b.max_lon - 0.3 * w, b.max_lat},
        {b.min_lon, b.max_lat},
    }}};
}

double distance_to_streets(const LonLat& p, const std::vector<EdgeInput>& edges) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : edges) best = std::min(best, point_polyline_distance_deg(p, e.geometry));
    return best;
}

}  // namespace

SyntheticWorld make_world(const WorldConfig& config, std::uint64_t seed) {
    if (config.columns < 2 || config.rows < 2) throw InvalidInput("lattice needs at least 2 x 2 vertices");
    if (config.sensors < 0) throw InvalidInput("sensor count must be non-negative");
    const BoundingBox& box = config.box;
    if (!(box.width() > 0.0 && box.height() > 0.0)) throw InvalidInput("world box has zero area");

    std::mt19937_64 rng(mix_seed(seed, world_stream));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double mx = config.margin * box.width();
    const double my = config.margin * box.height();
    const double dx = (box.width() - 2.0 * mx) / (config.columns - 1);
    const double dy = (box.height() - 2.0 * my) / (config.rows - 1);

    std::vector<std::vector<LonLat>> vertex(static_cast<std::size_t>(config.columns),
                                            std::vector<LonLat>(static_cast<std::size_t>(config.rows)));
    for (int i = 0; i < config.columns; ++i) {
        for (int j = 0; j < config.rows; ++j) {
            LonLat p{box.min_lon + mx + i * dx, box.min_lat + my + j * dy};
            const bool interior = i > 0 && j > 0 && i + 1 < config.columns && j + 1 < config.rows;
            if (interior) {
                p.lon += (2.0 * unit(rng) - 1.0) * config.jitter * dx;
                p.lat += (2.0 * unit(rng) - 1.0) * config.jitter * dy;
            }
            vertex[i][j] = p;
        }
    }

    SyntheticWorld world;
    world.boundary.polygons.push_back(world_outline(box));
    for (int j = 0; j < config.rows; ++j) {
        for (int i = 0; i + 1 < config.columns; ++i) {
            world.edges.push_back({fmt::format("h{}_{}", j, i), {vertex[i][j], vertex[i + 1][j]}, {}, false});
        }
    }
    for (int i = 0; i < config.columns; ++i) {
        for (int j = 0; j + 1 < config.rows; ++j) {
            world.edges.push_back({fmt::format("v{}_{}", i, j), {vertex[i][j], vertex[i][j + 1]}, {}, false});
        }
    }

    std::vector<double> cumulative;
    double total = 0.0;
    for (const auto& e : world.edges) {
        total += polyline_length_m(e.geometry);
        cumulative.push_back(total);
    }

    const int off = static_cast<int>(std::lround(config.off_network_fraction * config.sensors));
    for (int s = 0; s < config.sensors; ++s) {
        SensorPlacement sensor;
        sensor.id = fmt::format("s{:03}", s);
        if (s < config.sensors - off) {
            const double at = unit(rng) * total;
            const auto e = static_cast<std::size_t>(
                std::upper_bound(cumulative.begin(), cumulative.end(), at) - cumulative.begin());
            const auto& g = world.edges[std::min(e, world.edges.size() - 1)].geometry;
            const double f = 0.02 + 0.96 * unit(rng);
            const double vx = g[1].lon - g[0].lon;
            const double vy = g[1].lat - g[0].lat;
            const double norm = std::hypot(vx, vy);
            const double offset = (2.0 * unit(rng) - 1.0) * config.on_network_offset_deg;
            sensor.position = {g[0].lon + f * vx - offset * vy / norm,
                               g[0].lat + f * vy + offset * vx / norm};
        } else {
            for (int attempt = 0;; ++attempt) {
                if (attempt == 100000) throw InvalidInput("no room for off-network sensors");
                const LonLat p{box.min_lon + unit(rng) * box.width(),
                               box.min_lat + unit(rng) * box.height()};
                if (distance_to_streets(p, world.edges) >= config.off_network_min_deg) {
                    sensor.position = p;
                    break;
                }
            }
        }
        const bool forward = unit(rng) < 0.5;
        if (config.directions) sensor.direction = forward ? Direction::forward : Direction::reverse;
        world.sensors.push_back(std::move(sensor));
    }
    return world;
}

SimConfig default_sim_config() {
    SimConfig c;
    c.start = parse_iso_hour("2020-04-01T00:00:00Z");
    return c;
}

std::vector<SensorProfile> draw_profiles(const std::vector<std::string>& sensor_ids,
                                         const SimConfig& config, std::uint64_t seed) {
    if (!(config.base_min > 0.0 && config.base_max >= config.base_min)) {
        throw InvalidInput("base range must satisfy 0 < min <= max");
    }
    std::mt19937_64 rng(mix_seed(seed, profile_stream));
    std::uniform_real_distribution<double> log_base(std::log(config.base_min), std::log(config.base_max));
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<SensorProfile> out;
    out.reserve(sensor_ids.size());
    for (const auto& id : sensor_ids) {
        SensorProfile p;
        p.sensor_id = id;
        p.base = std::exp(log_base(rng));
        p.daily_phase = phase(rng);
        p.weekly_phase = phase(rng);
        if (const auto it = config.bases.find(id); it != config.bases.end()) {
            if (!(it->second > 0.0)) throw InvalidInput(fmt::format("base of sensor {} must be positive", id));
            p.base = it->second;
        }
        out.push_back(std::move(p));
    }
    return out;
}

double expected_count(const SensorProfile& profile, const SimConfig& config, Hour hour) {
    const auto t = static_cast<double>(hour - config.start);
    const double two_pi = 2.0 * std::numbers::pi;
    const double daily = 1.0 + config.daily_amplitude * std::sin(two_pi * t / 24.0 + profile.daily_phase);
    const double weekly = 1.0 + config.weekly_amplitude * std::sin(two_pi * t / 168.0 + profile.weekly_phase);
    return std::max(profile.base * daily * weekly, config.min_mean);
}

std::vector<SensorSeries> generate_surge_free(const std::vector<SensorProfile>& profiles,
                                              const SimConfig& config, std::uint64_t seed,
                                              std::uint64_t realization) {
    if (config.days_total <= config.train_days) {
        throw InvalidInput("days_total must exceed train_days");
    }
    const Hour hours = static_cast<Hour>(config.days_total) * hours_per_day;
    const std::uint64_t noise = mix_seed(mix_seed(seed, noise_stream), realization);
    std::vector<SensorSeries> out;
    out.reserve(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        std::mt19937_64 rng(mix_seed(noise, i));
        SensorSeries s;
        s.sensor_id = profiles[i].sensor_id;
        s.hours.resize(static_cast<std::size_t>(hours));
        s.counts.resize(static_cast<std::size_t>(hours));
        for (Hour h = 0; h < hours; ++h) {
            const Hour at = config.start + h;
            std::poisson_distribution<std::int64_t> draw(expected_count(profiles[i], config, at));
            s.hours[static_cast<std::size_t>(h)] = at;
            s.counts[static_cast<std::size_t>(h)] = draw(rng);
        }
        out.push_back(std::move(s));
    }
    return out;
}

double empirical_base(std::span<const double> values) {
    return nearest_rank_percentile(values, 90.0);
}

double surge_factor(double omega, int day, double cap) {
    return std::min(1.0 + omega * day, cap);
}

SurgeSpec draw_surge(const std::vector<LonLat>& positions,
                     const std::vector<SensorProfile>& profiles, const Boundary& boundary,
                     const SimConfig& config, const SurgeOptions& options, std::uint64_t seed) {
    if (positions.size() != profiles.size()) throw ContractViolation("positions and profiles differ in size");
    if (positions.empty()) throw InvalidInput("no sensors to surge");
    if (options.k_min < 1 || options.k_max < options.k_min) throw InvalidInput("surge k range invalid");
    if (options.days < 1 || options.days >= config.days_total) throw InvalidInput("surge days do not fit the data");

    std::mt19937_64 rng(mix_seed(seed, surge_stream));
    const BoundingBox box = boundary.bounding_box();
    std::uniform_real_distribution<double> lon(box.min_lon, box.max_lon);
    std::uniform_real_distribution<double> lat(box.min_lat, box.max_lat);
    SurgeSpec spec;
    for (int attempt = 0;; ++attempt) {
        if (attempt == 100000) throw InvalidInput("could not place an epicentre inside the boundary");
        const LonLat p{lon(rng), lat(rng)};
        if (boundary.contains(p)) {
            spec.epicentre = p;
            break;
        }
    }
    std::uniform_int_distribution<int> pick_k(options.k_min, options.k_max);
    std::size_t k = static_cast<std::size_t>(pick_k(rng));
    if (k > positions.size()) {
        spdlog::warn("surge wants {} sensors but only {} exist; using all", k, positions.size());
        k = positions.size();
    }
    std::vector<std::size_t> order(positions.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> dist(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) dist[i] = degree_distance(positions[i], spec.epicentre);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    spec.affected.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));

    double max_base = 0.0;
    for (std::size_t i : spec.affected) max_base = std::max(max_base, profiles[i].base);
    for (std::size_t i : spec.affected) spec.omega.push_back(options.max_rate * profiles[i].base / max_base);
    spec.days = options.days;
    spec.cap = options.cap;
    spec.first_hour = config.start + static_cast<Hour>(config.days_total - options.days) * hours_per_day;
    return spec;
}

std::vector<SensorSeries> inject_surge(const std::vector<SensorSeries>& data,
                                       const std::vector<SensorProfile>& profiles,
                                       const SimConfig& config, const SurgeSpec& spec,
                                       std::uint64_t seed) {
    if (data.size() != profiles.size()) throw ContractViolation("data and profiles differ in size");
    std::vector<SensorSeries> out = data;
    const Hour end = spec.first_hour + static_cast<Hour>(spec.days) * hours_per_day;
    for (std::size_t a = 0; a < spec.affected.size(); ++a) {
        const std::size_t i = spec.affected[a];
        SensorSeries& s = out[i];
        if (s.empty() || s.hours.front() > spec.first_hour || s.hours.back() < end - 1 || !s.contiguous()) {
            throw InvalidInput(fmt::format("series of sensor {} does not cover the surge days", s.sensor_id));
        }
        std::mt19937_64 rng(mix_seed(mix_seed(seed, redraw_stream), i));
        const auto offset = static_cast<std::size_t>(spec.first_hour - s.hours.front());
        for (Hour h = spec.first_hour; h < end; ++h) {
            const int day = static_cast<int>((h - spec.first_hour) / hours_per_day) + 1;
            const double lambda = surge_factor(spec.omega[a], day, spec.cap);
            std::poisson_distribution<std::int64_t> draw(lambda * expected_count(profiles[i], config, h));
            s.counts[offset + static_cast<std::size_t>(h - spec.first_hour)] = draw(rng);
        }
    }
    return out;
}

}  // namespace netscan
