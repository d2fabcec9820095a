#include "netscan/config.hpp"

#include <functional>
#include <map>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "netscan/error.hpp"
#include "netscan/io.hpp"

namespace netscan {

namespace {

struct Setting {
    std::string key;
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

template <typename T>
T parse_as(const std::string& text) {
    try {
        return boost::lexical_cast<T>(boost::trim_copy(text));
    } catch (const boost::bad_lexical_cast&) {
        throw ConfigError(fmt::format("'{}' is not a valid value", text));
    }
}

template <>
bool parse_as<bool>(const std::string& text) {
    const std::string t = boost::to_lower_copy(boost::trim_copy(text));
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError(fmt::format("'{}' is not a boolean", text));
}

template <>
std::string parse_as<std::string>(const std::string& text) {
    return boost::trim_copy(text);
}

std::string show(double v) { return format_double(v); }
std::string show(bool v) { return v ? "true" : "false"; }
template <typename T>
std::string show(const T& v) {
    if constexpr (std::is_same_v<T, std::string>) {
        return v;
    } else {
        return fmt::format("{}", v);
    }
}

template <typename T, typename Member>
Setting plain(std::string key, Member member) {
    return {std::move(key),
            [member](RunConfig& c, const std::string& v) { std::invoke(member, c) = parse_as<T>(v); },
            [member](const RunConfig& c) { return show(std::invoke(member, c)); }};
}

template <typename Parse, typename Show>
Setting custom(std::string key, Parse parse, Show print) {
    return {std::move(key), parse, print};
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> parts;
    boost::split(parts, text, boost::is_any_of(","));
    for (auto& p : parts) boost::trim(p);
    std::erase_if(parts, [](const std::string& p) { return p.empty(); });
    return parts;
}

const std::vector<Setting>& settings() {
    static const std::vector<Setting> table = [] {
        std::vector<Setting> t;
        t.push_back(plain<std::uint64_t>("run.seed", [](auto& c) -> auto& { return c.seed; }));
        t.push_back(plain<int>("run.threads", [](auto& c) -> auto& { return c.threads; }));

        t.push_back(plain<std::string>("paths.counts", [](auto& c) -> auto& { return c.paths.counts; }));
        t.push_back(plain<std::string>("paths.sensors", [](auto& c) -> auto& { return c.paths.sensors; }));
        t.push_back(plain<std::string>("paths.network", [](auto& c) -> auto& { return c.paths.network; }));
        t.push_back(plain<std::string>("paths.boundary", [](auto& c) -> auto& { return c.paths.boundary; }));
        t.push_back(plain<std::string>("paths.forecasts", [](auto& c) -> auto& { return c.paths.forecasts; }));
        t.push_back(plain<std::string>("paths.scores", [](auto& c) -> auto& { return c.paths.scores; }));
        t.push_back(plain<std::string>("paths.null", [](auto& c) -> auto& { return c.paths.null; }));
        t.push_back(plain<std::string>("paths.output_dir", [](auto& c) -> auto& { return c.paths.output_dir; }));

        t.push_back(custom(
            "forecast.method",
            [](RunConfig& c, const std::string& v) { c.forecast.method = forecast_method_from_string(boost::trim_copy(v)); },
            [](const RunConfig& c) { return std::string(to_string(c.forecast.method)); }));
        t.push_back(plain<double>("forecast.sigma_k", [](auto& c) -> auto& { return c.forecast.sigma_k; }));
        t.push_back(custom(
            "forecast.train_days",
            [](RunConfig& c, const std::string& v) { c.train_days = c.sim.train_days = parse_as<int>(v); },
            [](const RunConfig& c) { return show(c.train_days); }));
        t.push_back(plain<Hour>("forecast.horizon_hours", [](auto& c) -> auto& { return c.horizon_hours; }));
        t.push_back(plain<int>("forecast.gp_restarts", [](auto& c) -> auto& { return c.forecast.gp.restarts; }));
        t.push_back(plain<int>("forecast.gp_max_iterations", [](auto& c) -> auto& { return c.forecast.gp.max_iterations; }));
        t.push_back(plain<double>("forecast.gp_max_jitter", [](auto& c) -> auto& { return c.forecast.gp.max_jitter; }));

        t.push_back(plain<Hour>("preprocess.max_gap_hours", [](auto& c) -> auto& { return c.preprocess.max_gap_hours; }));
        t.push_back(plain<double>("preprocess.min_coverage", [](auto& c) -> auto& { return c.preprocess.min_coverage; }));
        t.push_back(plain<double>("preprocess.anomaly_multiple", [](auto& c) -> auto& { return c.preprocess.anomaly_multiple; }));

        t.push_back(custom(
            "scan.type",
            [](RunConfig& c, const std::string& v) {
                const std::string s = boost::to_lower_copy(boost::trim_copy(v));
                if (s == "pl") c.scan_types = {ScanType::planar};
                else if (s == "net") c.scan_types = {ScanType::network};
                else if (s == "both") c.scan_types = {ScanType::planar, ScanType::network};
                else throw ConfigError("scan type must be pl, net or both");
            },
            [](const RunConfig& c) {
                if (c.scan_types.size() == 2) return std::string("both");
                return std::string(c.scan_types.front() == ScanType::planar ? "pl" : "net");
            }));
        t.push_back(custom(
            "scan.metric",
            [](RunConfig& c, const std::string& v) { c.scan.options.metric = metric_from_string(boost::trim_copy(v)); },
            [](const RunConfig& c) { return std::string(to_string(c.scan.options.metric)); }));
        t.push_back(custom(
            "scan.bound",
            [](RunConfig& c, const std::string& v) { c.scan.options.bound = bound_mode_from_string(boost::trim_copy(v)); },
            [](const RunConfig& c) { return std::string(to_string(c.scan.options.bound)); }));
        t.push_back(custom(
            "scan.scale",
            [](RunConfig& c, const std::string& v) { c.scan.options.scale = score_scale_from_string(boost::trim_copy(v)); },
            [](const RunConfig& c) { return std::string(to_string(c.scan.options.scale)); }));
        t.push_back(plain<int>("scan.grid_n", [](auto& c) -> auto& { return c.scan.grid_n; }));
        t.push_back(plain<int>("scan.max_rect_size", [](auto& c) -> auto& { return c.scan.max_rect_side; }));
        t.push_back(plain<Hour>("scan.window_hours", [](auto& c) -> auto& { return c.scan.windows.max_length; }));
        t.push_back(plain<Hour>("scan.time_window_stride", [](auto& c) -> auto& { return c.scan.windows.stride; }));
        t.push_back(plain<bool>("scan.all_windows", [](auto& c) -> auto& { return c.scan.windows.all_windows; }));
        t.push_back(plain<double>("scan.min_path_m", [](auto& c) -> auto& { return c.scan.paths.min_length_m; }));
        t.push_back(plain<double>("scan.max_path_m", [](auto& c) -> auto& { return c.scan.paths.max_length_m; }));
        t.push_back(plain<std::size_t>("scan.path_cap", [](auto& c) -> auto& { return c.scan.paths.max_paths; }));
        t.push_back(plain<double>("scan.segment_m", [](auto& c) -> auto& { return c.scan.segment_m; }));
        t.push_back(plain<double>("scan.snap_tolerance_deg", [](auto& c) -> auto& { return c.scan.snap_tolerance_deg; }));
        t.push_back(custom(
            "scan.directions",
            [](RunConfig& c, const std::string& v) {
                const std::string s = boost::trim_copy(v);
                if (s == "undirected") c.scan.directions = DirectionMode::undirected;
                else if (s == "directed") c.scan.directions = DirectionMode::directed;
                else if (s == "both") c.scan.directions = DirectionMode::both;
                else throw ConfigError("scan directions must be undirected, directed or both");
            },
            [](const RunConfig& c) {
                switch (c.scan.directions) {
                    case DirectionMode::directed: return std::string("directed");
                    case DirectionMode::both: return std::string("both");
                    default: return std::string("undirected");
                }
            }));
        t.push_back(plain<double>("scan.percentile", [](auto& c) -> auto& { return c.scan.percentile; }));

        t.push_back(plain<int>("simulate.sensors", [](auto& c) -> auto& { return c.world.sensors; }));
        t.push_back(plain<int>("simulate.columns", [](auto& c) -> auto& { return c.world.columns; }));
        t.push_back(plain<int>("simulate.rows", [](auto& c) -> auto& { return c.world.rows; }));
        t.push_back(plain<double>("simulate.min_lon", [](auto& c) -> auto& { return c.world.box.min_lon; }));
        t.push_back(plain<double>("simulate.min_lat", [](auto& c) -> auto& { return c.world.box.min_lat; }));
        t.push_back(plain<double>("simulate.max_lon", [](auto& c) -> auto& { return c.world.box.max_lon; }));
        t.push_back(plain<double>("simulate.max_lat", [](auto& c) -> auto& { return c.world.box.max_lat; }));
        t.push_back(plain<double>("simulate.off_network_fraction", [](auto& c) -> auto& { return c.world.off_network_fraction; }));
        t.push_back(plain<bool>("simulate.directions", [](auto& c) -> auto& { return c.world.directions; }));
        t.push_back(plain<int>("simulate.days_total", [](auto& c) -> auto& { return c.sim.days_total; }));
        t.push_back(custom(
            "simulate.start",
            [](RunConfig& c, const std::string& v) {
                try {
                    c.sim.start = parse_iso_hour(boost::trim_copy(v));
                } catch (const Error& e) {
                    throw ConfigError(e.what());
                }
            },
            [](const RunConfig& c) { return format_iso_hour(c.sim.start); }));
        t.push_back(plain<double>("simulate.daily_amplitude", [](auto& c) -> auto& { return c.sim.daily_amplitude; }));
        t.push_back(plain<double>("simulate.weekly_amplitude", [](auto& c) -> auto& { return c.sim.weekly_amplitude; }));
        t.push_back(plain<double>("simulate.base_min", [](auto& c) -> auto& { return c.sim.base_min; }));
        t.push_back(plain<double>("simulate.base_max", [](auto& c) -> auto& { return c.sim.base_max; }));

        t.push_back(plain<int>("surge.k_min", [](auto& c) -> auto& { return c.surge.k_min; }));
        t.push_back(plain<int>("surge.k_max", [](auto& c) -> auto& { return c.surge.k_max; }));
        t.push_back(plain<int>("surge.days", [](auto& c) -> auto& { return c.surge.days; }));
        t.push_back(plain<double>("surge.cap", [](auto& c) -> auto& { return c.surge.cap; }));
        t.push_back(plain<double>("surge.max_rate", [](auto& c) -> auto& { return c.surge.max_rate; }));

        t.push_back(plain<int>("calibrate.days", [](auto& c) -> auto& { return c.null_days; }));

        t.push_back(plain<int>("evaluate.trials", [](auto& c) -> auto& { return c.trials; }));
        t.push_back(custom(
            "evaluate.methods",
            [](RunConfig& c, const std::string& v) {
                c.methods.clear();
                for (const auto& m : split_list(v)) c.methods.push_back(forecast_method_from_string(m));
            },
            [](const RunConfig& c) {
                std::vector<std::string> names;
                for (auto m : c.methods) names.emplace_back(to_string(m));
                return boost::join(names, ",");
            }));
        t.push_back(plain<double>("evaluate.confidence", [](auto& c) -> auto& { return c.confidence; }));
        t.push_back(plain<std::size_t>("evaluate.bootstrap_resamples", [](auto& c) -> auto& { return c.bootstrap_resamples; }));
        t.push_back(plain<bool>("evaluate.record_timings", [](auto& c) -> auto& { return c.record_timings; }));
        return t;
    }();
    return table;
}

const Setting* find_setting(const std::string& key) {
    for (const auto& s : settings()) {
        if (s.key == key) return &s;
    }
    return nullptr;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

}  // namespace

void set_config_value(RunConfig& config, const std::string& key, const std::string& value) {
    const Setting* s = find_setting(key);
    if (!s) throw ConfigError("unknown configuration key '" + key + "'");
    try {
        s->set(config, value);
    } catch (const ConfigError& e) {
        throw ConfigError(key + ": " + e.what());
    } catch (const Error& e) {
        throw ConfigError(key + ": " + e.what());
    }
}

void validate_config(const RunConfig& c) {
    require(c.threads >= 1, "run.threads must be at least 1");
    require(c.forecast.sigma_k >= 0.0, "forecast.sigma_k must be non-negative");
    require(c.train_days >= 2, "forecast.train_days must be at least 2");
    require(c.horizon_hours >= 1, "forecast.horizon_hours must be at least 1");
    require(c.forecast.gp.restarts >= 0, "forecast.gp_restarts must be non-negative");
    require(c.forecast.gp.max_iterations >= 0, "forecast.gp_max_iterations must be non-negative");
    require(c.forecast.gp.max_jitter > 0.0, "forecast.gp_max_jitter must be positive");
    require(c.preprocess.max_gap_hours >= 0, "preprocess.max_gap_hours must be non-negative");
    require(c.preprocess.min_coverage >= 0.0 && c.preprocess.min_coverage <= 1.0,
            "preprocess.min_coverage must lie in [0, 1]");
    require(c.preprocess.anomaly_multiple > 0.0, "preprocess.anomaly_multiple must be positive");
    require(c.scan.grid_n >= 1, "scan.grid_n must be at least 1");
    require(c.scan.max_rect_side >= 0, "scan.max_rect_size must be non-negative");
    require(c.scan.windows.max_length >= 1, "scan.window_hours must be at least 1");
    require(c.scan.windows.stride >= 1, "scan.time_window_stride must be at least 1");
    require(c.scan.paths.min_length_m >= 0.0 && c.scan.paths.min_length_m < c.scan.paths.max_length_m,
            "scan path bounds must satisfy 0 <= min_path_m < max_path_m");
    require(c.scan.paths.max_paths >= 1, "scan.path_cap must be at least 1");
    require(c.scan.segment_m > 0.0, "scan.segment_m must be positive");
    require(c.scan.snap_tolerance_deg >= 0.0, "scan.snap_tolerance_deg must be non-negative");
    require(c.scan.percentile >= 0.0 && c.scan.percentile <= 100.0, "scan.percentile must lie in [0, 100]");
    require(c.world.sensors >= 1, "simulate.sensors must be at least 1");
    require(c.world.columns >= 2 && c.world.rows >= 2, "simulate.columns and simulate.rows must be at least 2");
    require(c.world.box.max_lon > c.world.box.min_lon && c.world.box.max_lat > c.world.box.min_lat,
            "simulate box must have positive area");
    require(c.world.off_network_fraction >= 0.0 && c.world.off_network_fraction <= 1.0,
            "simulate.off_network_fraction must lie in [0, 1]");
    require(c.sim.days_total > c.sim.train_days, "simulate.days_total must exceed forecast.train_days");
    require(c.sim.base_min > 0.0 && c.sim.base_max >= c.sim.base_min,
            "simulate base range must satisfy 0 < base_min <= base_max");
    require(c.surge.k_min >= 1 && c.surge.k_max >= c.surge.k_min, "surge k range must satisfy 1 <= k_min <= k_max");
    require(c.surge.days >= 1, "surge.days must be at least 1");
    require(c.surge.cap >= 1.0, "surge.cap must be at least 1");
    require(c.surge.max_rate >= 0.0, "surge.max_rate must be non-negative");
    require(c.null_days >= 1, "calibrate.days must be at least 1");
    require(c.trials >= 0, "evaluate.trials must be non-negative");
    require(!c.methods.empty(), "evaluate.methods must name at least one method");
    require(c.confidence > 0.0 && c.confidence < 1.0, "evaluate.confidence must lie in (0, 1)");
    require(c.bootstrap_resamples >= 1, "evaluate.bootstrap_resamples must be at least 1");
}

RunConfig load_config(const std::string& path) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(path, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(fmt::format("{}:{}: {}", path, e.line(), e.message()));
    }
    RunConfig config;
    for (const auto& [section, keys] : tree) {
        if (keys.empty()) throw ConfigError(fmt::format("{}: key '{}' outside a section", path, section));
        for (const auto& [key, value] : keys) {
            try {
                set_config_value(config, section + "." + key, value.get_value<std::string>());
            } catch (const ConfigError& e) {
                throw ConfigError(path + ": " + e.what());
            }
        }
    }
    validate_config(config);
    return config;
}

std::string dump_config(const RunConfig& config) {
    std::string out;
    std::string section;
    for (const auto& s : settings()) {
        const auto dot = s.key.find('.');
        const std::string sec = s.key.substr(0, dot);
        if (sec != section) {
            out += (out.empty() ? "" : "\n") + fmt::format("[{}]\n", sec);
            section = sec;
        }
        out += fmt::format("{} = {}\n", s.key.substr(dot + 1), s.get(config));
    }
    return out;
}

}  // namespace netscan
