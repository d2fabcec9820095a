// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Cholesky>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "netscan/commands.hpp"
#include "netscan/config.hpp"
#include "netscan/error.hpp"
#include "netscan/evaluate.hpp"
#include "netscan/gaussian_process.hpp"
#include "netscan/grid.hpp"
#include "netscan/holt_winters.hpp"
#include "netscan/io.hpp"
#include "netscan/metric.hpp"
#include "netscan/network.hpp"
#include "netscan/scan.hpp"
#include "oracles.hpp"

using namespace netscan;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int worker_threads() {
    return static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 8u));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RegionAggregates agg(double b, double c) {
    RegionAggregates a;
    a.baseline = a.baseline_upper = a.baseline_lower = b;
    a.count = c;
    return a;
}

Outcome metric_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    const oracle::BruteForceEbp brute;
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> log_b(-1.0, 3.0), log_ratio(-2.0, std::log(100.0));
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double b = std::pow(10.0, log_b(rng));
        const double c = b * std::exp(log_ratio(rng));
        const double want = brute.log_max(c, b);
        const double got = ebp_score(agg(b, c)).log_raw;
        const double rel = want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
        worst = std::max(worst, rel);
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-9 && secs < 10.0, fmt::format("max relative error {:.2e}, {:.2f} s", worst, secs)};
}

Outcome metric_edges() {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.01, 200.0);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const double b = u(rng);
        const double c = u(rng);
        const double low = std::min(b, c);
        if (ebp_score(agg(std::max(b, c), low)).raw != 1.0) ++bad;
        if (asym_score(agg(b, b)).raw != 0.0) ++bad;
        const double s = asym_score(agg(b, c)).raw;
        if ((c > b && !(s > 0.0)) || (c < b && !(s < 0.0))) ++bad;
    }
    return {bad == 0, fmt::format("{} violations over 1000 pairs", bad)};
}

Outcome path_oracle() {
    std::mt19937_64 rng(3);
    int mismatched = 0;
    std::size_t total = 0;
    for (int g = 0; g < 100; ++g) {
        const auto segs = segment_network(make_road_network(oracle::random_graph(rng, 8)), 1000.0);
        std::uniform_int_distribution<int> lo(0, 300), span(100, 1500);
        PathEnumerationOptions o;
        o.min_length_m = lo(rng);
        o.max_length_m = o.min_length_m + span(rng);
        std::set<std::vector<SegmentId>> got;
        for (const auto& p : enumerate_paths(segs, o)) got.insert(p.canonical);
        total += got.size();
        if (got != oracle::exhaustive_paths(segs, o.min_length_m, o.max_length_m)) ++mismatched;
    }
    std::vector<EdgeInput> chain;
    for (int i = 0; i < 10; ++i) {
        chain.push_back(EdgeInput{"c" + std::to_string(i), {{0.001 * i, 0.0}, {0.001 * (i + 1), 0.0}}, 100.0, false});
    }
    PathEnumerationOptions o;
    o.min_length_m = 50;
    o.max_length_m = 1000;
    const auto n = enumerate_paths(segment_network(make_road_network(chain), 100.0), o).size();
    return {mismatched == 0 && n == 55,
            fmt::format("{} of 100 graphs differ ({} paths checked), chain of 10 gives {}", mismatched, total, n)};
}

Outcome grid_counting() {
    Boundary b;
    b.polygons.push_back(Polygon{{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}});
    std::string counts;
    bool ok = true;
    for (int n = 1; n <= 6; ++n) {
        const auto rects = enumerate_rectangles(build_grid(b, n), {});
        std::size_t brute = 0;
        for (int x0 = 0; x0 < n; ++x0)
            for (int x1 = 0; x1 < n; ++x1)
                for (int y0 = 0; y0 < n; ++y0)
                    for (int y1 = 0; y1 < n; ++y1) brute += (x0 <= x1 && y0 <= y1);
        const auto formula = static_cast<std::size_t>((n * (n + 1) / 2) * (n * (n + 1) / 2));
        ok = ok && rects.size() == formula && brute == formula;
        counts += fmt::format("{}{}", n == 1 ? "" : " ", rects.size());
    }
    return {ok, "counts " + counts};
}

Outcome holt_winters() {
    const std::vector<double> c{12, 9, 7, 5, 4, 6, 11, 20, 35, 42, 38, 30, 28,
                                29, 31, 33, 40, 45, 37, 26, 21, 18, 15, 13, 14};
    HwState s;
    for (std::size_t j = 0; j < 24; ++j) s.level += c[j];
    s.level /= 24.0;
    for (std::size_t j = 0; j < 24; ++j) s.season.push_back(c[j] / s.level);
    const HwParams p{0.3, 0.1, 0.25};
    const double expected[3][4] = {{12.0, 24.28125, 0.115625, 0.5333333333333333},
                                   {9.495, 24.396875, 0.115625, 0.3891891891891892},
                                   {7.42, 24.5125, 0.115625, 0.3027027027027027}};
    double trace_err = 0.0, obs = c[24];
    for (int k = 0; k < 3; ++k) {
        const std::size_t slot = s.phase;
        const double pred = s.step(obs, p);
        const double got[4] = {pred, s.level, s.trend, s.season[slot]};
        for (int j = 0; j < 4; ++j) trace_err = std::max(trace_err, std::abs(got[j] - expected[k][j]));
        obs = s.predict();
    }

    const std::vector<double> flat(21 * 24, 10.0);
    const auto model = run_holt_winters(flat, fit_holt_winters_params(flat));
    double flat_err = 0.0;
    for (double f : extrapolate_holt_winters(model, 48)) flat_err = std::max(flat_err, std::abs(f - 10.0));

    std::vector<double> wave;
    for (int t = 0; t < 21 * 24; ++t) wave.push_back(50.0 + 30.0 * std::sin(2.0 * std::numbers::pi * t / 24.0));
    const auto wp = fit_holt_winters_params(wave);
    HwState ws = initial_state(wave);
    double wave_err = 0.0;
    for (std::size_t t = 24; t < wave.size(); ++t) {
        wave_err = std::max(wave_err, std::abs(ws.step(wave[t], wp) - wave[t]) / wave[t]);
    }
    return {trace_err <= 1e-12 && flat_err < 1e-9 && wave_err < 0.01,
            fmt::format("trace error {:.1e}, constant error {:.1e}, periodic relative error {:.2e}", trace_err,
                        flat_err, wave_err)};
}

Outcome gp_validity() {
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> hour(0, 21 * 24 - 1);
    double worst_jitter = 0.0;
    bool factorized = true;
    for (int rep = 0; rep < 10; ++rep) {
        std::set<int> picked;
        while (picked.size() < 100) picked.insert(hour(rng));
        std::vector<double> x(picked.begin(), picked.end()), y;
        for (double t : x) y.push_back(std::sin(2 * std::numbers::pi * t / 24.0) + 0.3 * std::cos(t / 30.0));
        try {
            KernelParams p;
            p.white_variance = 1e-6;
            const auto r = log_marginal_likelihood(p, x, y, 1e-6, false);
            worst_jitter = std::max(worst_jitter, r.jitter);
        } catch (const IllConditioned&) {
            factorized = false;
        }
    }

    std::vector<double> x, y;
    for (int t = 0; t < 21 * 24; t += 5) {
        x.push_back(t);
        y.push_back(20.0 + 8.0 * std::sin(2 * std::numbers::pi * t / 24.0) + 3.0 * std::cos(2 * std::numbers::pi * t / 168.0));
    }
    GpConfig exact;
    exact.optimize = false;
    exact.init.white_variance = 1e-12;
    exact.lower[6] = 1e-14;
    exact.init.rbf_lengthscale = 50.0;
    const auto state = fit_gp(x, y, exact);
    const auto pred = predict_gp(state, x);
    double interp = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) interp = std::max(interp, std::abs(pred.mean[i] - y[i]));

    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> xn, yn;
    for (int t = 0; t < 14 * 24; t += 3) {
        xn.push_back(t);
        yn.push_back(20.0 + 8.0 * std::sin(2 * std::numbers::pi * t / 24.0) + noise(rng));
    }
    GpConfig opt;
    opt.max_iterations = 50;
    const auto fitted = fit_gp(xn, yn, opt);
    const bool improved = fitted.log_marginal_likelihood >= fitted.initial_log_marginal_likelihood;
    return {factorized && worst_jitter <= 1e-6 && interp < 1e-6 && improved,
            fmt::format("max jitter {:.1e}, interpolation error {:.1e}, LML {:.3f} -> {:.3f}", worst_jitter, interp,
                        fitted.initial_log_marginal_likelihood, fitted.log_marginal_likelihood)};
}

Outcome scan_oracle() {
    std::mt19937_64 rng(7);
    std::size_t checked = 0, mismatched = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto in = oracle::random_scan_instance(rng, 72);
        const ScanFrame frame(in.ids, in.forecasts, in.actuals, in.first, in.last);
        for (const auto& s : scan(in.spatial, in.regions, frame, ScanOptions{})) {
            const auto t = oracle::naive_totals(in.spatial[s.region.spatial].members, s.region.window, in.forecasts,
                                                in.actuals);
            RegionAggregates a;
            a.count = t.count;
            a.baseline = t.baseline;
            ++checked;
            if (s.aggregates.count != t.count || s.aggregates.baseline != t.baseline ||
                s.value.log_raw != ebp_score(a).log_raw) {
                ++mismatched;
            }
        }
    }
    return {mismatched == 0, fmt::format("{} of {} region scores differ", mismatched, checked)};
}

// Shared world and null for the benchmark and the false-alarm check.
struct Study {
    SyntheticWorld world;
    RoadNetwork network;
    ScanConfig scan;
    ScanSetup setup;
    SimConfig sim;
    CalibrationConfig calibration;
    std::vector<SensorProfile> profiles;
    std::vector<NullDistribution> nulls;
    double setup_secs = 0.0;
};

constexpr std::uint64_t study_seed = 42;

Study make_study() {
    const auto t0 = std::chrono::steady_clock::now();
    Study s;
    s.world = make_world(WorldConfig{}, study_seed);
    s.network = make_road_network(s.world.edges);
    s.setup = make_scan_setup(s.world.sensors, &s.world.boundary, &s.network, s.scan);
    s.sim = default_sim_config();
    s.calibration.threads = worker_threads();
    s.sim.days_total = calibration_days_total(s.calibration, s.scan);
    s.profiles = draw_profiles(s.setup.sensor_ids, s.sim, study_seed);
    s.nulls = calibrate_null(generate_surge_free(s.profiles, s.sim, study_seed, 0), s.setup,
                             {ScanType::planar, ScanType::network}, s.scan, s.calibration);
    s.setup_secs = seconds_since(t0);
    return s;
}

Outcome detection_benchmark(const Study& s) {
    const auto t0 = std::chrono::steady_clock::now();
    std::map<NullKey, NullDistribution> nulls;
    for (const auto& n : s.nulls) nulls[{n.scan_type, ForecastMethod::holt_winters}] = n;
    BenchmarkConfig bc;
    bc.sim = s.sim;
    bc.scan = s.scan;
    bc.seed = study_seed;
    bc.threads = worker_threads();
    bc.trials = 20;
    const auto results = run_benchmark(s.setup, s.profiles, s.world.boundary, nulls, bc);
    const auto report = build_report(results);
    const ConfigSummary* pl = nullptr;
    const ConfigSummary* net = nullptr;
    for (const auto& c : report.configs) (c.scan == ScanType::planar ? pl : net) = &c;
    if (!pl || !net) return {false, "missing scan type in report"};
    auto rising = [](const ConfigSummary& c) {
        for (std::size_t d = 1; d < c.score_by_day.size(); ++d) {
            if (c.score_by_day[d].mean < c.score_by_day[d - 1].mean) return false;
        }
        return c.score_by_day.size() == 3;
    };
    const bool a = pl->detection_rate >= 0.8 && net->detection_rate >= 0.8;
    const bool b = net->precision.mean > pl->precision.mean;
    const bool c = pl->recall.mean > net->recall.mean;
    const bool d = rising(*pl) && rising(*net);
    const double secs = s.setup_secs + seconds_since(t0);
    std::string days;
    for (const auto* cfg : {pl, net}) {
        days += fmt::format(" {} scores", to_string(cfg->scan));
        for (const auto& m : cfg->score_by_day) days += fmt::format(" {:.1f}", m.mean);
    }
    return {a && b && c && d && secs < 1800.0,
            fmt::format("(a) detection PL {:.2f} NET {:.2f} {}; (b) precision NET {:.3f} PL {:.3f} {}; "
                        "(c) recall PL {:.3f} NET {:.3f} {}; (d){} {}; {:.0f} s",
                        pl->detection_rate, net->detection_rate, a ? "ok" : "FAIL", net->precision.mean,
                        pl->precision.mean, b ? "ok" : "FAIL", pl->recall.mean, net->recall.mean, c ? "ok" : "FAIL",
                        days, d ? "ok" : "FAIL", secs)};
}

Outcome false_alarms(const Study& s) {
    CalibrationConfig fresh = s.calibration;
    fresh.n_days = 200;
    SimConfig sim = s.sim;
    sim.days_total = calibration_days_total(fresh, s.scan);
    const auto days = calibrate_null(generate_surge_free(s.profiles, sim, study_seed, 1), s.setup,
                                     {ScanType::planar, ScanType::network}, s.scan, fresh);
    bool ok = true;
    std::string detail;
    for (std::size_t t = 0; t < s.nulls.size(); ++t) {
        const double threshold = s.nulls[t].threshold(s.scan.percentile);
        const auto alarms = std::count_if(days[t].samples.begin(), days[t].samples.end(),
                                          [&](double v) { return v >= threshold; });
        const double rate = static_cast<double>(alarms) / static_cast<double>(days[t].samples.size());
        ok = ok && std::abs(rate - 0.01) <= 0.02;
        detail += fmt::format("{}{} {}/{} ({:.1f}%)", t ? ", " : "", to_string(s.nulls[t].scan_type), alarms,
                              days[t].samples.size(), 100.0 * rate);
    }
    return {ok, detail};
}

std::map<std::string, std::string> artifacts(const std::filesystem::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_regular_file()) {
            out[e.path().filename().string()] =
                fmt::format("{:016x}", std::hash<std::string>{}(read_file(e.path().string())));
        }
    }
    return out;
}

std::map<std::string, std::string> run_pipeline(const std::filesystem::path& dir) {
    RunConfig c;
    c.seed = 7;
    c.threads = worker_threads();
    c.paths.output_dir = dir.string();
    c.world.sensors = 30;
    c.world.columns = 3;
    c.world.rows = 2;
    c.sim.days_total = 25;
    c.scan.grid_n = 4;
    c.scan.paths.max_length_m = 600;
    c.null_days = 20;
    c.trials = 3;
    c.bootstrap_resamples = 200;
    c.record_timings = false;
    auto in_dir = [&](const char* name) { return (dir / name).string(); };

    cmd_simulate(c, SimulateArgs{true, ""});
    c.paths.counts = in_dir("counts.csv");
    c.paths.sensors = in_dir("sensors.csv");
    c.paths.network = in_dir("network.geojson");
    c.paths.boundary = in_dir("boundary.geojson");
    cmd_forecast(c, ForecastArgs{});
    c.paths.forecasts = in_dir("forecasts.csv");
    cmd_calibrate(c);
    c.paths.null = in_dir("null.csv");
    cmd_scan(c, ScanArgs{});
    c.paths.scores = in_dir("scores.csv");
    cmd_heatmap(c);
    cmd_evaluate(c);
    return artifacts(dir);
}

Outcome determinism() {
    oracle::TempDir first("accept"), second("accept");
    const auto a = run_pipeline(first.path());
    const auto b = run_pipeline(second.path());
    std::size_t differing = 0;
    for (const auto& [name, hash] : a) {
        const auto it = b.find(name);
        if (it == b.end() || it->second != hash) ++differing;
    }
    return {a.size() == b.size() && differing == 0 && a.size() >= 10,
            fmt::format("{} artifacts, {} differ", a.size(), differing)};
}

}  // namespace

int main() {
    spdlog::set_level(spdlog::level::err);
    int failed = 0;
    auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name << ": " << o.detail << std::endl;
    };

    report(1, "metric oracle", metric_oracle);
    report(2, "metric edge cases", metric_edges);
    report(3, "path enumeration oracle", path_oracle);
    report(4, "grid counting", grid_counting);
    report(5, "holt-winters", holt_winters);
    report(6, "gaussian process validity", gp_validity);
    report(7, "scan oracle", scan_oracle);

    std::optional<Study> study;
    std::string study_error;
    try {
        study = make_study();
    } catch (const std::exception& e) {
        study_error = std::string("calibration threw: ") + e.what();
    }
    report(8, "detection benchmark", [&]() -> Outcome {
        if (!study) return {false, study_error};
        return detection_benchmark(*study);
    });
    report(9, "false-alarm calibration", [&]() -> Outcome {
        if (!study) return {false, study_error};
        return false_alarms(*study);
    });
    report(10, "determinism", determinism);
    return failed;
}
