#include "netscan/gaussian_process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "netscan/error.hpp"
#include "netscan/stats.hpp"

namespace netscan {

using LogParams = std::array<double, KernelParams::count>;

std::array<double, KernelParams::count> KernelParams::to_log() const {
    return {std::log(daily_variance), std::log(daily_lengthscale), std::log(weekly_variance),
            std::log(weekly_lengthscale), std::log(rbf_variance),   std::log(rbf_lengthscale),
            std::log(white_variance)};
}

KernelParams KernelParams::from_log(const std::array<double, count>& v) {
    KernelParams p;
    p.daily_variance = std::exp(v[0]);
    p.daily_lengthscale = std::exp(v[1]);
    p.weekly_variance = std::exp(v[2]);
    p.weekly_lengthscale = std::exp(v[3]);
    p.rbf_variance = std::exp(v[4]);
    p.rbf_lengthscale = std::exp(v[5]);
    p.white_variance = std::exp(v[6]);
    return p;
}

namespace {

struct KernelTerms {
    double daily = 0.0;     // k_daily
    double weekly = 0.0;    // k_weekly
    double rbf = 0.0;
    double sin2_daily = 0.0;
    double sin2_weekly = 0.0;
    double r2 = 0.0;
};

KernelTerms terms(const KernelParams& p, double x, double y) {
    KernelTerms t;
    const double r = std::abs(x - y);
    const double sd = std::sin(std::numbers::pi * r / KernelParams::daily_period);
    const double sw = std::sin(std::numbers::pi * r / KernelParams::weekly_period);
    t.sin2_daily = sd * sd;
    t.sin2_weekly = sw * sw;
    t.r2 = r * r;
    t.daily = p.daily_variance *
              std::exp(-2.0 * t.sin2_daily / (p.daily_lengthscale * p.daily_lengthscale));
    t.weekly = p.weekly_variance *
               std::exp(-2.0 * t.sin2_weekly / (p.weekly_lengthscale * p.weekly_lengthscale));
    t.rbf = p.rbf_variance * std::exp(-t.r2 / (2.0 * p.rbf_lengthscale * p.rbf_lengthscale));
    return t;
}

}  // namespace

double kernel_cross(const KernelParams& p, double x, double y) {
    const KernelTerms t = terms(p, x, y);
    return t.daily * t.weekly + t.rbf;
}

double kernel_diag(const KernelParams& p) {
    return p.daily_variance * p.weekly_variance + p.rbf_variance + p.white_variance;
}

Eigen::MatrixXd gram_matrix(const KernelParams& p, std::span<const double> inputs) {
    const auto n = static_cast<Eigen::Index>(inputs.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = kernel_diag(p);
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = kernel_cross(p, inputs[static_cast<std::size_t>(i)],
                                          inputs[static_cast<std::size_t>(j)]);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return k;
}

namespace {

struct Factorization {
    Eigen::LLT<Eigen::MatrixXd> llt;
    double jitter = 0.0;
};

Factorization factorize(Eigen::MatrixXd k, double max_jitter) {
    static constexpr double ladder[] = {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4};
    double applied = 0.0;
    for (double jitter : ladder) {
        if (jitter > max_jitter) break;
        k.diagonal().array() += jitter - applied;
        applied = jitter;
        Factorization f;
        f.llt.compute(k);
        if (f.llt.info() == Eigen::Success && f.llt.matrixLLT().diagonal().allFinite() &&
            (f.llt.matrixLLT().diagonal().array() > 0.0).all()) {
            f.jitter = jitter;
            return f;
        }
    }
    throw IllConditioned("Gram matrix is not positive definite with jitter up to " +
                         std::to_string(max_jitter));
}

}  // namespace

LmlResult log_marginal_likelihood(const KernelParams& p, std::span<const double> inputs,
                                  std::span<const double> targets, double max_jitter,
                                  bool with_gradient) {
    const auto n = static_cast<Eigen::Index>(inputs.size());
    const Factorization f = factorize(gram_matrix(p, inputs), max_jitter);
    const Eigen::Map<const Eigen::VectorXd> y(targets.data(), n);
    const Eigen::VectorXd alpha = f.llt.solve(y);

    LmlResult out;
    out.jitter = f.jitter;
    const Eigen::MatrixXd l = f.llt.matrixL();
    out.value = -0.5 * y.dot(alpha) - l.diagonal().array().log().sum() -
                0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
    if (!with_gradient) return out;

    // d LML / d theta_j = 0.5 tr((alpha alpha^T - K^-1) dK/dtheta_j)
    Eigen::MatrixXd w = f.llt.solve(Eigen::MatrixXd::Identity(n, n));
    w = alpha * alpha.transpose() - w;

    const double inv_ld2 = 1.0 / (p.daily_lengthscale * p.daily_lengthscale);
    const double inv_lw2 = 1.0 / (p.weekly_lengthscale * p.weekly_lengthscale);
    const double inv_lr2 = 1.0 / (p.rbf_lengthscale * p.rbf_lengthscale);
    std::array<double, KernelParams::count> g{};
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double weight = (i == j ? 1.0 : 2.0) * w(i, j);
            const KernelTerms t = terms(p, inputs[static_cast<std::size_t>(i)],
                                        inputs[static_cast<std::size_t>(j)]);
            const double periodic = t.daily * t.weekly;
            g[0] += weight * periodic;
            g[1] += weight * periodic * 4.0 * t.sin2_daily * inv_ld2;
            g[2] += weight * periodic;
            g[3] += weight * periodic * 4.0 * t.sin2_weekly * inv_lw2;
            g[4] += weight * t.rbf;
            g[5] += weight * t.rbf * t.r2 * inv_lr2;
        }
        g[6] += w(i, i) * p.white_variance;
    }
    for (auto& v : g) v *= 0.5;
    out.gradient = g;
    return out;
}

namespace {

struct Objective {
    std::span<const double> inputs;
    std::span<const double> targets;
    double max_jitter;

    // Negative log marginal likelihood; +inf when the point cannot be factorized.
    double operator()(const LogParams& x, LogParams* grad) const {
        try {
            const LmlResult r = log_marginal_likelihood(KernelParams::from_log(x), inputs,
                                                        targets, max_jitter, grad != nullptr);
            if (!std::isfinite(r.value)) return std::numeric_limits<double>::infinity();
            if (grad) {
                for (std::size_t i = 0; i < x.size(); ++i) (*grad)[i] = -r.gradient[i];
            }
            return -r.value;
        } catch (const IllConditioned&) {
            return std::numeric_limits<double>::infinity();
        }
    }
};

LogParams clamp_to(const LogParams& x, const LogParams& lo, const LogParams& hi) {
    LogParams out;
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::clamp(x[i], lo[i], hi[i]);
    return out;
}

struct Best {
    LogParams x{};
    double f = std::numeric_limits<double>::infinity();

    void offer(const LogParams& cand, double value) {
        if (value < f) {
            f = value;
            x = cand;
        }
    }
};

// Projected BFGS on a box. Every evaluated point is offered to `best`.
void minimize_box(const Objective& objective, LogParams x, const LogParams& lo,
                  const LogParams& hi, int max_iterations, Best& best) {
    constexpr std::size_t d = KernelParams::count;
    using Vec = Eigen::Matrix<double, static_cast<int>(d), 1>;
    using Mat = Eigen::Matrix<double, static_cast<int>(d), static_cast<int>(d)>;
    auto to_vec = [](const LogParams& a) {
        Vec v;
        for (std::size_t i = 0; i < d; ++i) v(static_cast<Eigen::Index>(i)) = a[i];
        return v;
    };
    auto to_arr = [](const Vec& v) {
        LogParams a;
        for (std::size_t i = 0; i < d; ++i) a[i] = v(static_cast<Eigen::Index>(i));
        return a;
    };

    x = clamp_to(x, lo, hi);
    LogParams grad_arr{};
    double f = objective(x, &grad_arr);
    best.offer(x, f);
    if (!std::isfinite(f)) return;
    Vec g = to_vec(grad_arr);
    Mat h = Mat::Identity();

    for (int it = 0; it < max_iterations; ++it) {
        // Coordinates pinned at a bound with the gradient pushing outward.
        std::array<bool, d> pinned{};
        double pg_norm = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const auto k = static_cast<Eigen::Index>(i);
            pinned[i] = (x[i] <= lo[i] && g(k) > 0.0) || (x[i] >= hi[i] && g(k) < 0.0);
            if (!pinned[i]) pg_norm = std::max(pg_norm, std::abs(g(k)));
        }
        if (pg_norm < 1e-6) break;

        auto masked = [&](Vec v) {
            for (std::size_t i = 0; i < d; ++i) {
                if (pinned[i]) v(static_cast<Eigen::Index>(i)) = 0.0;
            }
            return v;
        };
        Vec dir = masked(-(h * g));
        if (g.dot(dir) >= 0.0) {
            h = Mat::Identity();
            dir = masked(-g);
        }
        const double dir_norm = dir.norm();
        if (dir_norm == 0.0) break;
        if (dir_norm > 2.0) dir *= 2.0 / dir_norm;

        double step = 1.0;
        bool accepted = false;
        LogParams x_new{};
        double f_new = 0.0;
        LogParams grad_new{};
        for (int bt = 0; bt < 30; ++bt) {
            x_new = clamp_to(to_arr(to_vec(x) + step * dir), lo, hi);
            f_new = objective(x_new, &grad_new);
            best.offer(x_new, f_new);
            const double decrease = g.dot(to_vec(x_new) - to_vec(x));
            if (std::isfinite(f_new) && f_new <= f + 1e-4 * decrease) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;

        const Vec s = to_vec(x_new) - to_vec(x);
        const Vec gn = to_vec(grad_new);
        const Vec y = gn - g;
        const double sy = s.dot(y);
        if (sy > 1e-12) {
            const double rho = 1.0 / sy;
            const Mat i = Mat::Identity();
            h = (i - rho * s * y.transpose()) * h * (i - rho * y * s.transpose()) +
                rho * s * s.transpose();
        }
        const double change = f - f_new;
        x = x_new;
        f = f_new;
        g = gn;
        if (change < 1e-9 * (1.0 + std::abs(f))) break;
    }
}

}  // namespace

GpState fit_gp(std::span<const double> inputs, std::span<const double> values,
               const GpConfig& config) {
    if (inputs.size() != values.size() || inputs.empty()) {
        throw InvalidInput("Gaussian process needs matching, non-empty inputs and targets");
    }
    GpState state;
    state.inputs.assign(inputs.begin(), inputs.end());
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= n;
    state.y_mean = mean;
    state.y_scale = var > 0.0 ? std::sqrt(var) : 1.0;
    std::vector<double> y(values.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = (values[i] - mean) / state.y_scale;

    LogParams lo, hi;
    for (std::size_t i = 0; i < KernelParams::count; ++i) {
        lo[i] = std::log(config.lower[i]);
        hi[i] = std::log(config.upper[i]);
    }
    const LogParams init = clamp_to(config.init.to_log(), lo, hi);
    const Objective objective{state.inputs, y, config.max_jitter};

    Best best;
    const double init_value = objective(init, nullptr);
    if (!std::isfinite(init_value)) {
        throw IllConditioned("Gram matrix at the initial hyperparameters cannot be factorized");
    }
    best.offer(init, init_value);
    state.initial_log_marginal_likelihood = -init_value;

    if (config.optimize) {
        std::mt19937_64 rng(mix_seed(config.seed, 0x6770));
        std::normal_distribution<double> jitter(0.0, 1.0);
        for (int run = 0; run < std::max(1, config.restarts); ++run) {
            LogParams start = init;
            if (run > 0) {
                for (std::size_t i = 0; i < start.size(); ++i) start[i] += jitter(rng);
            }
            minimize_box(objective, start, lo, hi, config.max_iterations, best);
        }
    }

    state.params = KernelParams::from_log(best.x);
    const Factorization f = factorize(gram_matrix(state.params, state.inputs), config.max_jitter);
    state.jitter = f.jitter;
    state.cholesky_l = f.llt.matrixL();
    const Eigen::Map<const Eigen::VectorXd> yv(y.data(), static_cast<Eigen::Index>(y.size()));
    state.alpha = f.llt.solve(yv);
    state.log_marginal_likelihood = -best.f;
    return state;
}

GpPrediction predict_gp(const GpState& state, std::span<const double> inputs) {
    const auto n = static_cast<Eigen::Index>(state.inputs.size());
    const auto m = static_cast<Eigen::Index>(inputs.size());
    Eigen::MatrixXd ks(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            ks(i, j) = kernel_cross(state.params, state.inputs[static_cast<std::size_t>(i)],
                                    inputs[static_cast<std::size_t>(j)]);
        }
    }
    const Eigen::VectorXd mean = ks.transpose() * state.alpha;
    const Eigen::MatrixXd v = state.cholesky_l.triangularView<Eigen::Lower>().solve(ks);
    const double prior = kernel_diag(state.params);

    GpPrediction out;
    out.mean.resize(static_cast<std::size_t>(m));
    out.std.resize(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) {
        const double var = std::max(prior - v.col(j).squaredNorm(), 0.0);
        out.mean[static_cast<std::size_t>(j)] = mean(j) * state.y_scale + state.y_mean;
        out.std[static_cast<std::size_t>(j)] = std::sqrt(var) * state.y_scale;
    }
    return out;
}

}  // namespace netscan
