#include "netscan/evaluate.hpp"

#include <algorithm>
#include <chrono>
#include <tuple>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "netscan/error.hpp"
#include "netscan/parallel.hpp"
#include "netscan/stats.hpp"

namespace netscan {

PrecisionRecall spatial_precision_recall(const std::vector<std::string>& top_members,
                                         const std::set<std::string>& truth) {
    if (truth.empty()) throw InvalidInput("precision and recall need a nonempty truth set");
    const std::set<std::string> members(top_members.begin(), top_members.end());
    std::size_t hits = 0;
    for (const auto& m : members) hits += truth.count(m);
    PrecisionRecall pr;
    if (!members.empty()) pr.precision = static_cast<double>(hits) / static_cast<double>(members.size());
    pr.recall = static_cast<double>(hits) / static_cast<double>(truth.size());
    return pr;
}

std::optional<int> detection_day(std::span<const double> corrected) {
    for (std::size_t d = 0; d < corrected.size(); ++d) {
        if (corrected[d] >= 0.0) return static_cast<int>(d) + 1;
    }
    return std::nullopt;
}

namespace {

Hour lead_days(const ScanConfig& scan) {
    return (scan.windows.max_length + hours_per_day - 1) / hours_per_day - 1;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int trial_days_total(const BenchmarkConfig& config) {
    return config.sim.train_days + static_cast<int>(lead_days(config.scan)) + config.surge.days;
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
    return mix_seed(seed, 0x7472'6961'6cULL + static_cast<std::uint64_t>(trial));
}

std::vector<TrialResult> run_benchmark(const ScanSetup& setup,
                                       const std::vector<SensorProfile>& profiles,
                                       const Boundary& boundary,
                                       const std::map<NullKey, NullDistribution>& nulls,
                                       const BenchmarkConfig& config) {
    if (config.trials < 0) throw InvalidInput("trial count must be non-negative");
    if (profiles.size() != setup.sensor_ids.size()) {
        throw ContractViolation("profiles and scan setup differ in sensor count");
    }
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        if (profiles[i].sensor_id != setup.sensor_ids[i]) {
            throw ContractViolation("profiles and scan setup list sensors in different order");
        }
    }
    std::map<NullKey, double> threshold;
    for (ScanType s : config.scans) {
        setup.regions(s);
        for (ForecastMethod m : config.methods) {
            const auto it = nulls.find({s, m});
            if (it == nulls.end()) {
                throw CalibrationError(fmt::format("no null distribution for {} with {}", to_string(s),
                                                   to_string(m)));
            }
            threshold[{s, m}] = it->second.threshold(config.scan.percentile);
        }
    }

    SimConfig sim = config.sim;
    sim.days_total = trial_days_total(config);
    const Hour train_hours = static_cast<Hour>(sim.train_days) * hours_per_day;
    const int days = config.surge.days;
    const std::size_t per_trial = config.scans.size() * config.methods.size();

    std::vector<TrialResult> results(static_cast<std::size_t>(config.trials) * per_trial);
    parallel_for(static_cast<std::size_t>(config.trials), config.threads, [&](std::size_t t) {
        const std::uint64_t seed = trial_seed(config.seed, static_cast<int>(t));
        auto slot = [&](std::size_t m, std::size_t s) -> TrialResult& {
            return results[t * per_trial + m * config.scans.size() + s];
        };
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            for (std::size_t s = 0; s < config.scans.size(); ++s) {
                TrialResult& r = slot(m, s);
                r.trial = t;
                r.scan = config.scans[s];
                r.forecast = config.methods[m];
            }
        }
        try {
            const auto clean = generate_surge_free(profiles, sim, config.seed, seed);
            const SurgeSpec surge = draw_surge(setup.positions, profiles, boundary, sim, config.surge, seed);
            const auto data = inject_surge(clean, profiles, sim, surge, seed);
            std::set<std::string> truth;
            std::set<std::string> snapped_truth;
            for (std::size_t i : surge.affected) {
                truth.insert(setup.sensor_ids[i]);
                if (setup.network && setup.network->placements[i].snapped()) {
                    snapped_truth.insert(setup.sensor_ids[i]);
                }
            }

            const Hour first_end = surge.first_hour + hours_per_day - 1;
            const Hour train_end = first_end - config.scan.windows.max_length + 1;
            const Hour forecast_end = surge.first_hour + static_cast<Hour>(days) * hours_per_day;

            for (std::size_t m = 0; m < config.methods.size(); ++m) {
                ForecastOptions fo = config.forecast;
                fo.method = config.methods[m];
                fo.gp.seed = mix_seed(seed, m);
                const auto t0 = std::chrono::steady_clock::now();
                const auto forecasts = forecast_all(data, train_end, train_hours, forecast_end, fo, 1);
                const double forecast_secs = seconds_since(t0);

                for (std::size_t s = 0; s < config.scans.size(); ++s) {
                    TrialResult& r = slot(m, s);
                    const ScanType type = config.scans[s];
                    const double level = threshold.at({type, config.methods[m]});
                    std::vector<RegionScore> tops;
                    const auto t1 = std::chrono::steady_clock::now();
                    for (int d = 1; d <= days; ++d) {
                        const Hour end = first_end + static_cast<Hour>(d - 1) * hours_per_day;
                        auto top = top_of_period(setup, type, forecasts, data, end, config.scan);
                        if (!top) throw InvalidInput(fmt::format("no region scored on outbreak day {}", d));
                        r.scores.push_back(top->score(config.scan.options.scale) - level);
                        tops.push_back(std::move(*top));
                    }
                    const double scan_secs = seconds_since(t1);
                    r.detect_day = detection_day(r.scores);
                    const RegionScore& chosen = tops[static_cast<std::size_t>(r.detect_day.value_or(days) - 1)];
                    std::vector<std::string> members;
                    for (std::size_t i : setup.regions(type)[chosen.region.spatial].members) {
                        members.push_back(setup.sensor_ids[i]);
                    }
                    const auto& against = type == ScanType::network ? snapped_truth : truth;
                    if (against.empty()) {
                        r.flags = "no-snapped-truth";
                    } else {
                        const auto pr = spatial_precision_recall(members, against);
                        r.precision = pr.precision;
                        r.recall = pr.recall;
                    }
                    if (config.record_timings) {
                        r.forecast_secs = forecast_secs;
                        r.scan_secs = scan_secs;
                    }
                }
            }
        } catch (const std::exception& e) {
            spdlog::warn("trial {} failed: {}", t, e.what());
            for (std::size_t m = 0; m < config.methods.size(); ++m) {
                for (std::size_t s = 0; s < config.scans.size(); ++s) {
                    TrialResult& r = slot(m, s);
                    r = TrialResult{};
                    r.trial = t;
                    r.scan = config.scans[s];
                    r.forecast = config.methods[m];
                    r.flags = std::string("failed: ") + e.what();
                }
            }
        }
    });
    return results;
}

BenchmarkReport build_report(const std::vector<TrialResult>& results, double level,
                             std::size_t resamples, std::uint64_t seed) {
    BenchmarkReport report;
    std::map<std::pair<int, int>, std::vector<const TrialResult*>> groups;
    std::set<std::uint64_t> trials;
    for (const auto& r : results) {
        groups[{static_cast<int>(r.scan), static_cast<int>(r.forecast)}].push_back(&r);
        trials.insert(r.trial);
    }
    report.trials = trials.size();

    std::uint64_t stream = 0;
    for (const auto& [key, group] : groups) {
        ConfigSummary c;
        c.scan = static_cast<ScanType>(key.first);
        c.forecast = static_cast<ForecastMethod>(key.second);
        c.trials = group.size();
        std::vector<double> precision, recall, detect_days;
        std::vector<std::vector<double>> by_day;
        double forecast_secs = 0.0, scan_secs = 0.0;
        std::size_t detected = 0;
        for (const TrialResult* r : group) {
            if (r->failed()) {
                ++c.failed;
                continue;
            }
            if (!r->flags.empty()) ++c.flagged;
            precision.push_back(r->precision);
            recall.push_back(r->recall);
            if (r->detect_day) {
                ++detected;
                detect_days.push_back(*r->detect_day);
            }
            if (by_day.size() < r->scores.size()) by_day.resize(r->scores.size());
            for (std::size_t d = 0; d < r->scores.size(); ++d) by_day[d].push_back(r->scores[d]);
            forecast_secs += r->forecast_secs;
            scan_secs += r->scan_secs;
        }
        if (c.failed * 10 > c.trials) {
            throw BenchmarkError(fmt::format("{} of {} trials failed for {} with {}; refusing to aggregate",
                                             c.failed, c.trials, to_string(c.scan), to_string(c.forecast)));
        }
        const std::size_t ok = c.trials - c.failed;
        auto summarize = [&](const std::vector<double>& v) {
            return MeanInterval{mean_of(v), bootstrap_mean_interval(v, level, resamples, mix_seed(seed, stream++))};
        };
        if (ok > 0) {
            c.detection_rate = static_cast<double>(detected) / static_cast<double>(ok);
            c.mean_forecast_secs = forecast_secs / static_cast<double>(ok);
            c.mean_scan_secs = scan_secs / static_cast<double>(ok);
        }
        if (!detect_days.empty()) c.mean_detect_day = mean_of(detect_days);
        c.precision = summarize(precision);
        c.recall = summarize(recall);
        for (const auto& d : by_day) c.score_by_day.push_back(summarize(d));
        report.configs.push_back(std::move(c));
    }
    return report;
}

std::string format_report(const BenchmarkReport& report) {
    std::string out = fmt::format("trials: {}\n", report.trials);
    auto mi = [](const MeanInterval& m) { return fmt::format("{:.4f} [{:.4f}, {:.4f}]", m.mean, m.ci.low, m.ci.high); };
    for (const auto& c : report.configs) {
        out += fmt::format("\n{} / {}\n", to_string(c.scan), to_string(c.forecast));
        out += fmt::format("  trials {} (failed {}, flagged {})\n", c.trials, c.failed, c.flagged);
        out += fmt::format("  detection rate {:.4f}\n", c.detection_rate);
        out += fmt::format("  mean detection day {}\n",
                           c.mean_detect_day ? fmt::format("{:.4f}", *c.mean_detect_day) : "none");
        out += fmt::format("  precision {}\n", mi(c.precision));
        out += fmt::format("  recall {}\n", mi(c.recall));
        for (std::size_t d = 0; d < c.score_by_day.size(); ++d) {
            out += fmt::format("  corrected score day {} {}\n", d + 1, mi(c.score_by_day[d]));
        }
        out += fmt::format("  forecast secs {:.4f}, scan secs {:.4f}\n", c.mean_forecast_secs, c.mean_scan_secs);
    }
    return out;
}

}  // namespace netscan
