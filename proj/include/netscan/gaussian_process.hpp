#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace netscan {

// Hyperparameters of
//   k(x, y) = k_per(24h) * k_per(168h) + k_rbf + k_white
// with k_per(p) = s exp(-2 sin^2(pi |x - y| / p) / l^2) and
// k_rbf = s exp(-|x - y|^2 / (2 l^2)). Periods are fixed.
struct KernelParams {
    double daily_variance = 1.0;
    double daily_lengthscale = 1.0;
    double weekly_variance = 1.0;
    double weekly_lengthscale = 1.0;
    double rbf_variance = 0.1;
    double rbf_lengthscale = 100.0;
    double white_variance = 0.1;

    static constexpr double daily_period = 24.0;
    static constexpr double weekly_period = 168.0;
    static constexpr std::size_t count = 7;

    std::array<double, count> to_log() const;
    static KernelParams from_log(const std::array<double, count>& log_params);
};

// Covariance between distinct inputs (no white term).
double kernel_cross(const KernelParams& p, double x, double y);
// Prior variance at a single input, white term included.
double kernel_diag(const KernelParams& p);

struct GpConfig {
    KernelParams init;
    int restarts = 3;          // optimizer runs, the first from `init`
    int max_iterations = 100;  // per run
    double max_jitter = 1e-6;
    bool optimize = true;
    std::uint64_t seed = 0;    // for restart perturbations
    // Log-space box for every hyperparameter, in KernelParams field order.
    std::array<double, KernelParams::count> lower = {1e-4, 0.05, 1e-4, 0.05, 1e-4, 1.0, 1e-6};
    std::array<double, KernelParams::count> upper = {1e2, 20.0, 1e2, 20.0, 1e2, 1e4, 1e1};
};

struct GpState {
    KernelParams params;
    std::vector<double> inputs;  // training hours relative to the first one
    double y_mean = 0.0;
    double y_scale = 1.0;
    Eigen::VectorXd alpha;       // (K + jitter)^-1 y_standardized
    Eigen::MatrixXd cholesky_l;  // lower factor
    double jitter = 0.0;
    double log_marginal_likelihood = 0.0;
    double initial_log_marginal_likelihood = 0.0;
};

// Gram matrix of the training inputs, white term on the diagonal.
Eigen::MatrixXd gram_matrix(const KernelParams& p, std::span<const double> inputs);

struct LmlResult {
    double value = 0.0;
    std::array<double, KernelParams::count> gradient{};  // w.r.t. log parameters
    double jitter = 0.0;
};

// Log marginal likelihood of standardized targets. Adds jitter up to
// `max_jitter` before giving up with IllConditioned.
LmlResult log_marginal_likelihood(const KernelParams& p, std::span<const double> inputs,
                                  std::span<const double> targets, double max_jitter,
                                  bool with_gradient);

// Standardizes `values`, optimizes hyperparameters (unless disabled) and
// factorizes. Inputs are hours relative to the first training hour.
GpState fit_gp(std::span<const double> inputs, std::span<const double> values,
               const GpConfig& config);

struct GpPrediction {
    std::vector<double> mean;
    std::vector<double> std;
};

// Posterior predictive mean and standard deviation (white noise included),
// de-standardized.
GpPrediction predict_gp(const GpState& state, std::span<const double> inputs);

}  // namespace netscan
