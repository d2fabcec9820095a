#include "netscan/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <map>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "netscan/error.hpp"
#include "netscan/evaluate.hpp"
#include "netscan/io.hpp"
#include "netscan/pipeline.hpp"
#include "netscan/simulate.hpp"
#include "netscan/stats.hpp"

namespace netscan {

namespace {

namespace fs = std::filesystem;

std::string out_path(const RunConfig& c, const std::string& name) {
    return (fs::path(c.paths.output_dir) / name).string();
}

std::string required(const std::string& path, const char* key) {
    if (path.empty()) throw ConfigError(fmt::format("paths.{} is required", key));
    return path;
}

bool has_type(const RunConfig& c, ScanType t) {
    return std::find(c.scan_types.begin(), c.scan_types.end(), t) != c.scan_types.end();
}

struct World {
    std::vector<SensorPlacement> sensors;
    std::vector<EdgeInput> edges;
    std::optional<RoadNetwork> network;
    std::optional<Boundary> boundary;
};

// Sensors, network and boundary from the configured files, or a synthetic
// world drawn from the seed when no sensor file is given.
World load_world(const RunConfig& c) {
    World w;
    if (c.paths.sensors.empty()) {
        SyntheticWorld s = make_world(c.world, c.seed);
        w.sensors = std::move(s.sensors);
        w.edges = std::move(s.edges);
        w.boundary = std::move(s.boundary);
    } else {
        w.sensors = read_sensors(c.paths.sensors);
        if (!c.paths.network.empty()) w.edges = read_network(c.paths.network);
        if (!c.paths.boundary.empty()) w.boundary = read_boundary_geojson(c.paths.boundary);
    }
    if (!w.edges.empty()) w.network = make_road_network(w.edges);
    return w;
}

ScanSetup setup_for(const World& w, const RunConfig& c) {
    const bool pl = has_type(c, ScanType::planar);
    const bool net = has_type(c, ScanType::network);
    if (pl && !w.boundary) throw ConfigError("PL scans need paths.boundary");
    if (net && !w.network) throw ConfigError("NET scans need paths.network");
    return make_scan_setup(w.sensors, pl ? &*w.boundary : nullptr, net ? &*w.network : nullptr, c.scan);
}

// Boundary for epicentre sampling: the configured one or the sensors' box.
Boundary surge_boundary(const World& w) {
    if (w.boundary) return *w.boundary;
    BoundingBox b{w.sensors.front().position.lon, w.sensors.front().position.lat,
                  w.sensors.front().position.lon, w.sensors.front().position.lat};
    for (const auto& s : w.sensors) {
        b.min_lon = std::min(b.min_lon, s.position.lon);
        b.min_lat = std::min(b.min_lat, s.position.lat);
        b.max_lon = std::max(b.max_lon, s.position.lon);
        b.max_lat = std::max(b.max_lat, s.position.lat);
    }
    return Boundary{{Polygon{{{{b.min_lon, b.min_lat}, {b.max_lon, b.min_lat}, {b.max_lon, b.max_lat},
                               {b.min_lon, b.max_lat}}}}}};
}

std::vector<std::string> ids_of(const std::vector<SensorPlacement>& sensors) {
    std::vector<std::string> ids;
    for (const auto& s : sensors) ids.push_back(s.id);
    return ids;
}

std::vector<NullDistribution> calibrate(const World& w, const ScanSetup& setup, const RunConfig& c,
                                        ForecastMethod method) {
    CalibrationConfig cc;
    cc.n_days = c.null_days;
    cc.train_days = c.train_days;
    cc.forecast = c.forecast;
    cc.forecast.method = method;
    cc.forecast.gp.seed = c.seed;
    cc.threads = c.threads;
    SimConfig sim = c.sim;
    sim.days_total = calibration_days_total(cc, c.scan);
    const auto profiles = draw_profiles(ids_of(w.sensors), sim, c.seed);
    const auto data = generate_surge_free(profiles, sim, c.seed, 0);
    spdlog::info("calibrating {} days with {} forecasts", cc.n_days, to_string(method));
    return calibrate_null(data, setup, c.scan_types, c.scan, cc);
}

std::string thresholds_or_warn(const std::vector<NullDistribution>& nulls, double percentile) {
    for (const auto& n : nulls) {
        if (n.count() < min_null_samples) {
            spdlog::warn("null of {} has {} samples, fewer than {}; thresholds not written",
                         to_string(n.scan_type), n.count(), min_null_samples);
            return {};
        }
    }
    return thresholds_csv(nulls, percentile);
}

nlohmann::json summary_json(const BenchmarkReport& report) {
    using nlohmann::json;
    auto mi = [](const MeanInterval& m) { return json{{"mean", m.mean}, {"low", m.ci.low}, {"high", m.ci.high}}; };
    json configs = json::array();
    for (const auto& c : report.configs) {
        json days = json::array();
        for (const auto& d : c.score_by_day) days.push_back(mi(d));
        configs.push_back({{"scan", to_string(c.scan)},
                           {"forecast", to_string(c.forecast)},
                           {"trials", c.trials},
                           {"failed", c.failed},
                           {"flagged", c.flagged},
                           {"detection_rate", c.detection_rate},
                           {"mean_detect_day", c.mean_detect_day ? json(*c.mean_detect_day) : json()},
                           {"precision", mi(c.precision)},
                           {"recall", mi(c.recall)},
                           {"corrected_score_by_day", days},
                           {"mean_forecast_secs", c.mean_forecast_secs},
                           {"mean_scan_secs", c.mean_scan_secs}});
    }
    return {{"trials", report.trials}, {"configs", configs}};
}

}  // namespace

void cmd_simulate(const RunConfig& c, const SimulateArgs& args) {
    const World w = load_world(c);
    SimConfig sim = c.sim;
    if (!args.empirical.empty()) {
        for (const auto& s : read_counts(args.empirical)) {
            const std::vector<double> values(s.counts.begin(), s.counts.end());
            sim.bases[s.sensor_id] = std::max(empirical_base(values), 0.1);
        }
    }
    const auto profiles = draw_profiles(ids_of(w.sensors), sim, c.seed);
    auto data = generate_surge_free(profiles, sim, c.seed, 0);
    std::string surge;
    if (args.surge) {
        std::vector<LonLat> positions;
        for (const auto& s : w.sensors) positions.push_back(s.position);
        const SurgeSpec spec = draw_surge(positions, profiles, surge_boundary(w), sim, c.surge, c.seed);
        data = inject_surge(data, profiles, sim, spec, c.seed);
        surge = surge_csv(spec, ids_of(w.sensors));
        spdlog::info("surge at ({}, {}) affects {} sensors from {}", spec.epicentre.lon, spec.epicentre.lat,
                     spec.affected.size(), format_iso_hour(spec.first_hour));
    }
    write_file_atomic(out_path(c, "sensors.csv"), sensors_csv(w.sensors));
    if (!w.edges.empty()) write_file_atomic(out_path(c, "network.geojson"), network_geojson(w.edges));
    if (w.boundary) write_file_atomic(out_path(c, "boundary.geojson"), boundary_geojson(*w.boundary));
    write_file_atomic(out_path(c, "counts.csv"), counts_csv(data));
    if (args.surge) write_file_atomic(out_path(c, "surge.csv"), surge);
}

void cmd_forecast(const RunConfig& c, const ForecastArgs& args) {
    const auto counts = read_counts(required(c.paths.counts, "counts"));
    if (counts.empty()) throw InvalidInput("counts file has no rows");
    const Hour train_hours = static_cast<Hour>(c.train_days) * hours_per_day;
    Hour train_end = 0;
    if (args.train_end) {
        train_end = *args.train_end;
    } else {
        Hour first = counts.front().hours.front();
        for (const auto& s : counts) first = std::min(first, s.hours.front());
        train_end = first + train_hours;
    }
    const Hour train_start = train_end - train_hours;

    std::vector<SensorSeries> train;
    for (const auto& s : counts) {
        SensorSeries window;
        window.sensor_id = s.sensor_id;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s.hours[i] >= train_start && s.hours[i] < train_end) {
                window.hours.push_back(s.hours[i]);
                window.counts.push_back(s.counts[i]);
            }
        }
        auto result = preprocess(window, c.preprocess);
        if (const auto* r = std::get_if<Rejection>(&result)) {
            spdlog::warn("sensor {} rejected: {}", s.sensor_id, r->detail);
            continue;
        }
        auto& clean = std::get<SensorSeries>(result);
        if (clean.hours.front() != train_start || clean.hours.back() != train_end - 1) {
            spdlog::warn("sensor {} rejected: counts do not span the training window", s.sensor_id);
            continue;
        }
        train.push_back(std::move(clean));
    }
    if (train.empty()) throw InvalidInput("no sensor has usable training data");
    ForecastOptions options = c.forecast;
    options.gp.seed = c.seed;
    const auto forecasts =
        forecast_all(train, train_end, train_hours, train_end + c.horizon_hours, options, c.threads);
    const std::string path = c.paths.forecasts.empty() ? out_path(c, "forecasts.csv") : c.paths.forecasts;
    write_file_atomic(path, forecasts_csv(forecasts));
}

void cmd_scan(const RunConfig& c, const ScanArgs& args) {
    const auto counts = read_counts(required(c.paths.counts, "counts"));
    const auto forecasts = read_forecasts(required(c.paths.forecasts, "forecasts"));
    required(c.paths.sensors, "sensors");
    const World w = load_world(c);
    const ScanSetup setup = setup_for(w, c);

    std::optional<std::vector<NullDistribution>> nulls;
    if (!c.paths.null.empty()) nulls = read_null(c.paths.null);

    Hour end = 0;
    if (args.window_end) {
        end = *args.window_end;
    } else {
        bool any = false;
        for (const auto& f : forecasts) {
            if (f.size() == 0) continue;
            end = any ? std::max(end, f.hours.back()) : f.hours.back();
            any = true;
        }
        if (!any) throw InvalidInput("forecasts file has no rows");
    }
    const Hour first = end - c.scan.windows.max_length + 1;
    const ScanFrame frame(setup.sensor_ids, forecasts, counts, first, end);
    const auto windows = scan_windows(end, c.scan);

    std::vector<ScoreRow> rows;
    for (ScanType type : c.scan_types) {
        const auto& spatial = setup.regions(type);
        std::vector<SpaceTimeRegion> regions;
        regions.reserve(spatial.size() * windows.size());
        for (std::size_t i = 0; i < spatial.size(); ++i) {
            for (const auto& win : windows) regions.push_back({i, win});
        }
        auto scores = scan(spatial, regions, frame, c.scan.options);
        std::optional<double> threshold;
        if (nulls) {
            for (const auto& n : *nulls) {
                if (n.scan_type == type && n.metric == c.scan.options.metric) threshold = n.threshold(c.scan.percentile);
            }
            if (!threshold) {
                throw CalibrationError(fmt::format("null file has no {} {} distribution", to_string(type),
                                                   to_string(c.scan.options.metric)));
            }
        }
        const std::size_t keep = args.top > 0 ? std::min(args.top, scores.size()) : scores.size();
        for (std::size_t i = 0; i < keep; ++i) {
            if (threshold) scores[i].corrected = scores[i].score(c.scan.options.scale) - *threshold;
            rows.push_back(to_row(scores[i], spatial, c.scan.options.bound));
        }
        if (!scores.empty()) {
            const auto& top = scores.front();
            spdlog::info("{} top region {} [{}, {}] score {}", to_string(type), spatial[top.region.spatial].key,
                         format_iso_hour(top.region.window.start), format_iso_hour(top.region.window.end),
                         top.score(c.scan.options.scale));
        }
    }
    const std::string path = c.paths.scores.empty() ? out_path(c, "scores.csv") : c.paths.scores;
    write_file_atomic(path, scores_csv(rows));
}

void cmd_calibrate(const RunConfig& c) {
    const World w = load_world(c);
    const ScanSetup setup = setup_for(w, c);
    const auto nulls = calibrate(w, setup, c, c.forecast.method);
    const std::string thresholds = thresholds_or_warn(nulls, c.scan.percentile);
    write_file_atomic(out_path(c, "null.csv"), null_csv(nulls));
    if (!thresholds.empty()) write_file_atomic(out_path(c, "thresholds.csv"), thresholds);
}

void cmd_evaluate(const RunConfig& c) {
    const World w = load_world(c);
    const ScanSetup setup = setup_for(w, c);

    std::map<NullKey, NullDistribution> nulls;
    std::vector<NullDistribution> from_file;
    if (!c.paths.null.empty()) {
        from_file = read_null(c.paths.null);
        if (c.methods.size() > 1) spdlog::warn("one null file is applied to every forecast method");
    }
    for (ForecastMethod m : c.methods) {
        std::vector<NullDistribution> list = from_file;
        if (c.paths.null.empty()) {
            list = calibrate(w, setup, c, m);
            write_file_atomic(out_path(c, fmt::format("null_{}.csv", to_string(m))), null_csv(list));
        }
        for (const auto& n : list) {
            if (n.metric == c.scan.options.metric) nulls[{n.scan_type, m}] = n;
        }
    }

    BenchmarkConfig bc;
    bc.sim = c.sim;
    bc.surge = c.surge;
    bc.scan = c.scan;
    bc.forecast = c.forecast;
    bc.scans = c.scan_types;
    bc.methods = c.methods;
    bc.trials = c.trials;
    bc.seed = c.seed;
    bc.threads = c.threads;
    bc.record_timings = c.record_timings;
    const auto profiles = draw_profiles(setup.sensor_ids, c.sim, c.seed);
    const auto results = run_benchmark(setup, profiles, surge_boundary(w), nulls, bc);
    write_file_atomic(out_path(c, "results.csv"), results_csv(results, c.surge.days));

    const BenchmarkReport report = build_report(results, c.confidence, c.bootstrap_resamples, c.seed);
    write_file_atomic(out_path(c, "report.txt"), format_report(report));
    write_file_atomic(out_path(c, "summary.json"), summary_json(report).dump(2) + "\n");
}

void cmd_heatmap(const RunConfig& c) {
    const std::string scores_path = c.paths.scores.empty() ? out_path(c, "scores.csv") : c.paths.scores;
    const auto rows = read_scores(scores_path);
    const bool log_scale = c.scan.options.scale == ScoreScale::log;

    for (ScanType type : c.scan_types) {
        const char* prefix = type == ScanType::planar ? "R:" : "P:";
        std::vector<const ScoreRow*> mine;
        for (const auto& r : rows) {
            if (r.region_key.starts_with(prefix)) mine.push_back(&r);
        }
        const std::string path =
            out_path(c, type == ScanType::planar ? "heatmap_pl.geojson" : "heatmap_net.geojson");
        if (mine.empty()) {
            write_file_atomic(path, "{\"features\":[],\"type\":\"FeatureCollection\"}\n");
            continue;
        }
        if (type == ScanType::planar) {
            const Boundary boundary = read_boundary_geojson(required(c.paths.boundary, "boundary"));
            const PlanarGrid grid = build_grid(boundary, c.scan.grid_n);
            const int n = grid.resolution();
            HeatmapAccumulator acc(static_cast<std::size_t>(n * n), c.scan.options.scale);
            for (const ScoreRow* r : mine) {
                const auto rect = parse_rectangle_key(r->region_key);
                if (!rect || rect->x1 >= n || rect->y1 >= n) {
                    throw InvalidInput(fmt::format("{}: region {} does not fit a {}x{} grid", scores_path,
                                                   r->region_key, n, n));
                }
                SpatialRegion region;
                for (int y = rect->y0; y <= rect->y1; ++y) {
                    for (int x = rect->x0; x <= rect->x1; ++x) region.footprint.push_back(static_cast<std::size_t>(y * n + x));
                }
                acc.add(region, log_scale ? r->log_raw : r->raw);
            }
            write_file_atomic(path, grid_heatmap_geojson(grid, acc.means()));
        } else {
            const auto network = make_road_network(read_network(required(c.paths.network, "network")));
            const auto segments = segment_network(network, c.scan.segment_m);
            HeatmapAccumulator acc(segments.size(), c.scan.options.scale);
            for (const ScoreRow* r : mine) {
                SpatialRegion region;
                const std::string ids = r->region_key.substr(2);
                std::size_t pos = 0;
                while (pos <= ids.size()) {
                    const std::size_t comma = std::min(ids.find(',', pos), ids.size());
                    const std::string part = ids.substr(pos, comma - pos);
                    std::size_t id = 0;
                    try {
                        id = std::stoul(part);
                    } catch (const std::exception&) {
                        id = segments.size();
                    }
                    if (id >= segments.size()) {
                        throw InvalidInput(fmt::format("{}: region {} names an unknown segment", scores_path,
                                                       r->region_key));
                    }
                    region.footprint.push_back(id);
                    pos = comma + 1;
                }
                acc.add(region, log_scale ? r->log_raw : r->raw);
            }
            write_file_atomic(path, network_heatmap_geojson(segments, acc.means()));
        }
    }
}

}  // namespace netscan
