#pragma once

#include <span>
#include <vector>

#include "netscan/series.hpp"

namespace netscan {

// Multiplicative Holt-Winters with a 24-hour season:
//   X_t = a c_t / Z_{t-24} + (1 - a)(X_{t-1} + Y_{t-1})
//   Y_t = b (X_t - X_{t-1}) + (1 - b) Y_{t-1}
//   Z_t = g c_t / X_t + (1 - g) Z_{t-24}
// with one-step prediction (X_{t-1} + Y_{t-1}) Z_{t-24}.
struct HwParams {
    double alpha = 0.2;
    double beta = 0.05;
    double gamma = 0.2;
};

struct HwState {
    double level = 0.0;
    double trend = 0.0;
    std::vector<double> season;  // ring of 24 factors
    std::size_t phase = 0;       // index of Z_{t-24} for the next step

    static constexpr std::size_t period = 24;

    double predict() const;
    // Applies one observation and returns the prediction made before it.
    double step(double observation, const HwParams& params);
};

// Level = mean of the first period, trend = (mean of second - mean of first) / 24,
// season = first period / first-period mean. Needs >= 48 values.
HwState initial_state(std::span<const double> values);

// Sum of squared one-step errors after the first period, divided by count.
double one_step_mse(std::span<const double> values, const HwParams& params);

struct HwModel {
    HwParams params;
    HwState state;         // after consuming the training values
    bool degenerate = false;  // all-zero training data
};

// Coordinate search over (alpha, beta, gamma): a 0.05 grid per coordinate
// refined by golden section, repeated until no coordinate improves.
HwParams fit_holt_winters_params(std::span<const double> values);

// Runs the recursion over the training values with fixed parameters. An
// all-zero input yields a degenerate model.
HwModel run_holt_winters(std::span<const double> values, const HwParams& params);

// Iterated forecast, feeding each prediction back as the observation.
std::vector<double> extrapolate_holt_winters(const HwModel& model, std::size_t horizon);

}  // namespace netscan
