#include "netscan/holt_winters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "netscan/error.hpp"

namespace netscan {

namespace {

// Seasonal factors below this are treated as this when dividing.
constexpr double season_floor = 1e-3;
constexpr double param_min = 1e-4;
constexpr double param_max = 1.0 - 1e-4;

double mean_range(std::span<const double> v, std::size_t from, std::size_t to) {
    return std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(from),
                           v.begin() + static_cast<std::ptrdiff_t>(to), 0.0) /
           static_cast<double>(to - from);
}

}  // namespace

double HwState::predict() const { return (level + trend) * season[phase]; }

double HwState::step(double observation, const HwParams& p) {
    const double prediction = predict();
    const double z_old = season[phase];
    const double x_new =
        p.alpha * observation / std::max(z_old, season_floor) + (1.0 - p.alpha) * (level + trend);
    const double y_new = p.beta * (x_new - level) + (1.0 - p.beta) * trend;
    const double z_new = x_new > 0.0 ? p.gamma * observation / x_new + (1.0 - p.gamma) * z_old : z_old;
    season[phase] = z_new;
    phase = (phase + 1) % period;
    level = x_new;
    trend = y_new;
    return prediction;
}

HwState initial_state(std::span<const double> values) {
    if (values.size() < 2 * HwState::period) {
        throw InvalidInput("Holt-Winters needs at least two 24-hour periods of training data");
    }
    HwState s;
    const double first = mean_range(values, 0, HwState::period);
    const double second = mean_range(values, HwState::period, 2 * HwState::period);
    s.level = first;
    s.trend = (second - first) / static_cast<double>(HwState::period);
    s.season.assign(HwState::period, 1.0);
    if (first > 0.0) {
        for (std::size_t j = 0; j < HwState::period; ++j) s.season[j] = values[j] / first;
    }
    s.phase = 0;
    return s;
}

double one_step_mse(std::span<const double> values, const HwParams& params) {
    HwState s = initial_state(values);
    double sum = 0.0;
    for (std::size_t t = HwState::period; t < values.size(); ++t) {
        const double e = values[t] - s.step(values[t], params);
        sum += e * e;
    }
    const double n = static_cast<double>(values.size() - HwState::period);
    return std::isfinite(sum) ? sum / n : std::numeric_limits<double>::infinity();
}

HwParams fit_holt_winters_params(std::span<const double> values) {
    HwParams best;
    if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) return best;

    auto objective = [&](const HwParams& p) { return one_step_mse(values, p); };
    double best_mse = objective(best);
    auto coord = [](HwParams& p, int j) -> double& {
        return j == 0 ? p.alpha : (j == 1 ? p.beta : p.gamma);
    };

    constexpr int max_cycles = 4;
    constexpr int golden_iterations = 30;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

    for (int cycle = 0; cycle < max_cycles; ++cycle) {
        const double cycle_start = best_mse;
        for (int j = 0; j < 3; ++j) {
            HwParams trial = best;
            double grid_best = coord(best, j);
            double grid_mse = best_mse;
            for (int g = 1; g <= 19; ++g) {
                coord(trial, j) = 0.05 * g;
                const double m = objective(trial);
                if (m < grid_mse) {
                    grid_mse = m;
                    grid_best = coord(trial, j);
                }
            }
            double a = std::max(param_min, grid_best - 0.05);
            double b = std::min(param_max, grid_best + 0.05);
            double c = b - inv_phi * (b - a);
            double d = a + inv_phi * (b - a);
            coord(trial, j) = c;
            double fc = objective(trial);
            coord(trial, j) = d;
            double fd = objective(trial);
            for (int it = 0; it < golden_iterations; ++it) {
                if (fc < fd) {
                    b = d;
                    d = c;
                    fd = fc;
                    c = b - inv_phi * (b - a);
                    coord(trial, j) = c;
                    fc = objective(trial);
                } else {
                    a = c;
                    c = d;
                    fc = fd;
                    d = a + inv_phi * (b - a);
                    coord(trial, j) = d;
                    fd = objective(trial);
                }
            }
            const double golden_best = fc < fd ? c : d;
            const double golden_mse = std::min(fc, fd);
            if (golden_mse < grid_mse) {
                grid_mse = golden_mse;
                grid_best = golden_best;
            }
            if (grid_mse < best_mse) {
                best_mse = grid_mse;
                coord(best, j) = grid_best;
            }
        }
        if (!(best_mse < cycle_start * (1.0 - 1e-9))) break;
    }
    return best;
}

HwModel run_holt_winters(std::span<const double> values, const HwParams& params) {
    HwModel model;
    model.params = params;
    if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) {
        if (values.size() < 2 * HwState::period) {
            throw InvalidInput("Holt-Winters needs at least two 24-hour periods of training data");
        }
        model.degenerate = true;
        model.state.season.assign(HwState::period, 1.0);
        return model;
    }
    model.state = initial_state(values);
    for (std::size_t t = HwState::period; t < values.size(); ++t) {
        model.state.step(values[t], params);
    }
    return model;
}

std::vector<double> extrapolate_holt_winters(const HwModel& model, std::size_t horizon) {
    std::vector<double> out;
    out.reserve(horizon);
    if (model.degenerate) {
        out.assign(horizon, 0.0);
        return out;
    }
    HwState s = model.state;
    for (std::size_t h = 0; h < horizon; ++h) {
        const double prediction = s.predict();
        out.push_back(prediction);
        s.step(prediction, model.params);
    }
    return out;
}

}  // namespace netscan
