#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance runner. None of these call into the code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <unistd.h>

#include "netscan/metric.hpp"
#include "netscan/network.hpp"
#include "netscan/scan.hpp"
#include "netscan/series.hpp"

namespace oracle {

// Integer-length graph on a handful of nodes, one segment per edge.
inline std::vector<netscan::EdgeInput> random_graph(std::mt19937_64& rng, int max_edges) {
    std::uniform_int_distribution<int> node_count(2, 6);
    const int nodes = node_count(rng);
    std::uniform_int_distribution<int> edge_count(1, max_edges);
    std::uniform_int_distribution<int> pick(0, nodes - 1);
    std::uniform_int_distribution<int> length(20, 400);
    const int edges = edge_count(rng);
    std::vector<netscan::EdgeInput> out;
    for (int e = 0; e < edges; ++e) {
        int a = pick(rng), b = pick(rng);
        while (b == a) b = pick(rng);
        netscan::EdgeInput in;
        in.id = "e" + std::to_string(e);
        in.geometry = {{0.01 * a, 0.003 * (a % 3)}, {0.01 * b, 0.003 * (b % 3)}};
        in.length_m = static_cast<double>(length(rng));
        out.push_back(std::move(in));
    }
    return out;
}

// Every ordered sequence of distinct segments, kept when consecutive
// segments meet end to start and the total length is in [lo, hi].
inline std::set<std::vector<netscan::SegmentId>> exhaustive_paths(
    const std::vector<netscan::Segment>& segs, double lo, double hi) {
    std::set<std::vector<netscan::SegmentId>> found;
    std::vector<int> seq;
    std::vector<bool> used(segs.size(), false);
    std::function<void(netscan::NodeKey, double)> grow = [&](netscan::NodeKey exit, double len) {
        if (len >= lo && len <= hi) {
            std::vector<netscan::SegmentId> key(seq.begin(), seq.end());
            std::sort(key.begin(), key.end());
            found.insert(key);
        }
        for (std::size_t j = 0; j < segs.size(); ++j) {
            if (used[j]) continue;
            const auto& s = segs[j];
            if (s.start != exit && s.end != exit) continue;
            const netscan::NodeKey next_exit = s.start == exit ? s.end : s.start;
            used[j] = true;
            seq.push_back(static_cast<int>(j));
            grow(next_exit, len + s.length_m);
            seq.pop_back();
            used[j] = false;
        }
    };
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (int orient = 0; orient < 2; ++orient) {
            used[i] = true;
            seq = {static_cast<int>(i)};
            grow(orient == 0 ? segs[i].end : segs[i].start, segs[i].length_m);
            used[i] = false;
        }
    }
    return found;
}

// max over q > 1 of C ln q - (q - 1) B, by a log-spaced grid on (1, q_max]
// followed by golden-section refinement of the best cell.
class BruteForceEbp {
public:
    explicit BruteForceEbp(std::size_t points = 1'000'000, double q_max = 100.0) {
        ln_q_.resize(points);
        q_minus_1_.resize(points);
        const double step = std::log(q_max) / static_cast<double>(points);
        for (std::size_t i = 0; i < points; ++i) {
            ln_q_[i] = step * static_cast<double>(i + 1);
            q_minus_1_[i] = std::expm1(ln_q_[i]);
        }
        step_ = step;
    }

    double log_max(double count, double baseline) const {
        double best = 0.0;  // the supremum at q -> 1
        std::size_t arg = ln_q_.size();
        for (std::size_t i = 0; i < ln_q_.size(); ++i) {
            const double f = count * ln_q_[i] - q_minus_1_[i] * baseline;
            if (f > best) {
                best = f;
                arg = i;
            }
        }
        if (arg == ln_q_.size()) return 0.0;
        auto f = [&](double u) { return count * u - std::expm1(u) * baseline; };
        double a = std::max(0.0, ln_q_[arg] - step_);
        double b = ln_q_[arg] + step_;
        const double r = (std::sqrt(5.0) - 1.0) / 2.0;
        for (int it = 0; it < 200 && b - a > 0.0; ++it) {
            const double c = b - r * (b - a), d = a + r * (b - a);
            if (f(c) > f(d)) b = d; else a = c;
        }
        return std::max(best, f(0.5 * (a + b)));
    }

private:
    std::vector<double> ln_q_;
    std::vector<double> q_minus_1_;
    double step_ = 0.0;
};

// C and B of a space-time region by direct summation over members and hours.
struct NaiveTotals {
    double count = 0.0;
    double baseline = 0.0;
    bool complete = true;
};

inline NaiveTotals naive_totals(const std::vector<std::size_t>& members,
                                const netscan::TimeWindow& w,
                                const std::vector<netscan::ForecastSeries>& forecasts,
                                const std::vector<netscan::SensorSeries>& actuals) {
    NaiveTotals t;
    for (std::size_t m : members) {
        for (netscan::Hour h = w.start; h <= w.end; ++h) {
            bool have_f = false, have_c = false;
            for (std::size_t k = 0; k < forecasts[m].hours.size(); ++k) {
                if (forecasts[m].hours[k] == h) {
                    t.baseline += forecasts[m].mean[k];
                    have_f = true;
                }
            }
            for (std::size_t k = 0; k < actuals[m].hours.size(); ++k) {
                if (actuals[m].hours[k] == h) {
                    t.count += static_cast<double>(actuals[m].counts[k]);
                    have_c = true;
                }
            }
            if (!have_f || !have_c) t.complete = false;
        }
    }
    return t;
}

// Random scan problem with dyadic baselines and integer counts, so every
// sum is exact in double precision.
struct ScanInstance {
    std::vector<std::string> ids;
    std::vector<netscan::ForecastSeries> forecasts;
    std::vector<netscan::SensorSeries> actuals;
    std::vector<netscan::SpatialRegion> spatial;
    std::vector<netscan::SpaceTimeRegion> regions;
    netscan::Hour first = 0;
    netscan::Hour last = 0;
};

inline ScanInstance random_scan_instance(std::mt19937_64& rng, netscan::Hour hours = 72) {
    ScanInstance in;
    std::uniform_int_distribution<int> sensors(1, 20), regions(1, 50), eighths(1, 400), count(0, 80);
    const int n = sensors(rng);
    in.first = 1000;
    in.last = in.first + hours - 1;
    for (int i = 0; i < n; ++i) {
        const std::string id = "s" + std::to_string(i);
        in.ids.push_back(id);
        netscan::ForecastSeries f;
        f.sensor_id = id;
        netscan::SensorSeries a;
        a.sensor_id = id;
        for (netscan::Hour h = in.first; h <= in.last; ++h) {
            const double m = eighths(rng) / 8.0;
            f.hours.push_back(h);
            f.mean.push_back(m);
            f.std.push_back(0.0);
            f.upper.push_back(m + 0.5);
            f.lower.push_back(m);
            a.hours.push_back(h);
            a.counts.push_back(count(rng));
        }
        in.forecasts.push_back(std::move(f));
        in.actuals.push_back(std::move(a));
    }
    std::bernoulli_distribution take(0.3);
    const int r = regions(rng);
    for (int k = 0; k < r; ++k) {
        netscan::SpatialRegion s;
        s.key = "R" + std::to_string(k);
        for (int i = 0; i < n; ++i) {
            if (take(rng)) s.members.push_back(static_cast<std::size_t>(i));
        }
        if (s.members.empty()) s.members.push_back(static_cast<std::size_t>(k % n));
        s.extent = static_cast<double>(s.members.size());
        in.spatial.push_back(std::move(s));
    }
    std::uniform_int_distribution<netscan::Hour> start(in.first, in.last);
    for (std::size_t k = 0; k < in.spatial.size(); ++k) {
        for (int w = 0; w < 3; ++w) {
            netscan::Hour a = start(rng), b = start(rng);
            if (a > b) std::swap(a, b);
            in.regions.push_back({k, {a, b}});
        }
    }
    return in;
}

// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("netscan_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

}  // namespace oracle
