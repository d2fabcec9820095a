#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "netscan/commands.hpp"
#include "netscan/config.hpp"
#include "netscan/error.hpp"

namespace {

void fail(const std::string& kind, const std::string& message) {
    std::string line = message;
    for (char& ch : line) {
        if (ch == '\n' || ch == '\r') ch = ' ';
    }
    std::cerr << "ERROR " << kind << " " << line << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Expectation-based scan statistics over planar grids and road networks"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool verbose = false;
    std::vector<std::string> overrides;
    app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "Random seed");
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--verbose", verbose, "Debug logging");
    app.add_option("--set", overrides, "Override a setting, section.key=value (repeatable)");

    netscan::RunPaths paths;
    auto path_option = [&](CLI::App* cmd, const char* name, std::string& target, const char* help) {
        cmd->add_option(name, target, help);
    };
    std::string type, method, out_dir;

    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic world and surge-free counts");
    netscan::SimulateArgs sim_args;
    simulate->add_flag("--surge", sim_args.surge, "Inject a surge into the final days");
    simulate->add_option("--empirical", sim_args.empirical, "Counts CSV that sets each sensor's base rate")
        ->check(CLI::ExistingFile);
    path_option(simulate, "--sensors", paths.sensors, "Sensor CSV to use instead of a synthetic world");
    path_option(simulate, "--network", paths.network, "Road network (GeoJSON or edge-list CSV)");
    path_option(simulate, "--boundary", paths.boundary, "Boundary GeoJSON");
    simulate->add_option("--out-dir", out_dir, "Output directory");

    auto* forecast = app.add_subcommand("forecast", "Fit baselines and write forecasts");
    std::string train_end;
    path_option(forecast, "--counts", paths.counts, "Counts CSV");
    path_option(forecast, "--out", paths.forecasts, "Forecast CSV to write");
    forecast->add_option("--train-end", train_end, "First forecast hour (ISO 8601)");
    forecast->add_option("--method", method, "hw or gp");
    forecast->add_option("--out-dir", out_dir, "Output directory");

    auto* scan = app.add_subcommand("scan", "Score every search region");
    netscan::ScanArgs scan_args;
    std::string window_end;
    path_option(scan, "--counts", paths.counts, "Counts CSV");
    path_option(scan, "--forecasts", paths.forecasts, "Forecast CSV");
    path_option(scan, "--sensors", paths.sensors, "Sensor CSV");
    path_option(scan, "--network", paths.network, "Road network");
    path_option(scan, "--boundary", paths.boundary, "Boundary GeoJSON");
    path_option(scan, "--null", paths.null, "Null distribution CSV for corrected scores");
    path_option(scan, "--out", paths.scores, "Scores CSV to write");
    scan->add_option("--type", type, "pl, net or both");
    scan->add_option("--window-end", window_end, "Last hour of the scan (ISO 8601)");
    scan->add_option("--top", scan_args.top, "Keep the best N rows per scan type (0 = all)");
    scan->add_option("--out-dir", out_dir, "Output directory");

    auto* calibrate = app.add_subcommand("calibrate", "Estimate the null distribution of daily maximum scores");
    path_option(calibrate, "--sensors", paths.sensors, "Sensor CSV");
    path_option(calibrate, "--network", paths.network, "Road network");
    path_option(calibrate, "--boundary", paths.boundary, "Boundary GeoJSON");
    calibrate->add_option("--type", type, "pl, net or both");
    calibrate->add_option("--method", method, "hw or gp");
    calibrate->add_option("--out-dir", out_dir, "Output directory");

    auto* evaluate = app.add_subcommand("evaluate", "Run the simulated-surge benchmark");
    path_option(evaluate, "--sensors", paths.sensors, "Sensor CSV");
    path_option(evaluate, "--network", paths.network, "Road network");
    path_option(evaluate, "--boundary", paths.boundary, "Boundary GeoJSON");
    path_option(evaluate, "--null", paths.null, "Null distribution CSV (skips calibration)");
    evaluate->add_option("--type", type, "pl, net or both");
    evaluate->add_option("--out-dir", out_dir, "Output directory");

    auto* heatmap = app.add_subcommand("heatmap", "Average region scores per grid cell or segment");
    path_option(heatmap, "--scores", paths.scores, "Scores CSV");
    path_option(heatmap, "--network", paths.network, "Road network");
    path_option(heatmap, "--boundary", paths.boundary, "Boundary GeoJSON");
    heatmap->add_option("--type", type, "pl, net or both");
    heatmap->add_option("--out-dir", out_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail("usage", e.what());
        return 64;
    }

    auto logger = spdlog::stderr_color_mt("netscan");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("[%l] %v");
    spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

    try {
        netscan::RunConfig config = config_path.empty() ? netscan::RunConfig{} : netscan::load_config(config_path);
        for (const auto& o : overrides) {
            const auto eq = o.find('=');
            if (eq == std::string::npos) throw netscan::ConfigError("--set expects section.key=value, got '" + o + "'");
            netscan::set_config_value(config, o.substr(0, eq), o.substr(eq + 1));
        }
        auto set_path = [&](const std::string& value, const char* key) {
            if (!value.empty()) netscan::set_config_value(config, key, value);
        };
        set_path(paths.counts, "paths.counts");
        set_path(paths.sensors, "paths.sensors");
        set_path(paths.network, "paths.network");
        set_path(paths.boundary, "paths.boundary");
        set_path(paths.forecasts, "paths.forecasts");
        set_path(paths.scores, "paths.scores");
        set_path(paths.null, "paths.null");
        set_path(out_dir, "paths.output_dir");
        set_path(type, "scan.type");
        set_path(method, "forecast.method");
        if (seed) config.seed = *seed;
        if (threads) config.threads = *threads;
        netscan::validate_config(config);
        spdlog::info("resolved configuration:\n{}", netscan::dump_config(config));

        if (*simulate) {
            netscan::cmd_simulate(config, sim_args);
        } else if (*forecast) {
            netscan::ForecastArgs args;
            if (!train_end.empty()) args.train_end = netscan::parse_iso_hour(train_end);
            netscan::cmd_forecast(config, args);
        } else if (*scan) {
            if (!window_end.empty()) scan_args.window_end = netscan::parse_iso_hour(window_end);
            netscan::cmd_scan(config, scan_args);
        } else if (*calibrate) {
            netscan::cmd_calibrate(config);
        } else if (*evaluate) {
            netscan::cmd_evaluate(config);
        } else if (*heatmap) {
            netscan::cmd_heatmap(config);
        }
    } catch (const netscan::Error& e) {
        fail(e.kind(), e.what());
        return 2;
    } catch (const std::exception& e) {
        fail("internal", e.what());
        return 3;
    }
    return 0;
}
