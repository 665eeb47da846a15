#include "maskopt/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "maskopt/nelder_mead.hpp"

namespace maskopt {

namespace {

constexpr double kSqrt5 = 2.23606797749978969640917366873128;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::MatrixXd gram(const std::vector<std::vector<double>>& x, const GpHyperparams& hp) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double v = matern52(x[static_cast<std::size_t>(i)],
                                      x[static_cast<std::size_t>(j)], hp);
            k(i, j) = v;
            k(j, i) = v;
        }
        k(i, i) += hp.noise_variance;
    }
    return k;
}

// Negative log marginal likelihood of standardised scores; +inf when the
// factorisation fails.
double negative_lml(const std::vector<std::vector<double>>& x, const Eigen::VectorXd& y,
                    const GpHyperparams& hp) {
    Eigen::LLT<Eigen::MatrixXd> llt(gram(x, hp));
    if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    const Eigen::VectorXd alpha = llt.solve(y);
    const Eigen::MatrixXd& l = llt.matrixLLT();
    const double log_det = 2.0 * l.diagonal().array().log().sum();
    const auto n = static_cast<double>(y.size());
    return 0.5 * y.dot(alpha) + 0.5 * log_det + 0.5 * n * std::log(2.0 * std::numbers::pi);
}

}  // namespace

double matern52(const std::vector<double>& x1, const std::vector<double>& x2,
                const GpHyperparams& hp) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < x1.size(); ++i) {
        const double d = (x1[i] - x2[i]) / hp.length_scales[i];
        r2 += d * d;
    }
    const double r = std::sqrt(r2);
    return hp.signal_variance * (1.0 + kSqrt5 * r + 5.0 * r2 / 3.0) * std::exp(-kSqrt5 * r);
}

double expected_improvement(double mean, double variance, double incumbent) {
    const double gain = incumbent - mean;
    if (!(variance > 0.0)) return std::max(0.0, gain);
    const double sigma = std::sqrt(variance);
    const double z = gain / sigma;
    const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    return std::max(0.0, gain * cdf + sigma * pdf);
}

GaussianProcess GaussianProcess::condition(std::vector<std::vector<double>> inputs,
                                           std::vector<double> scores, GpHyperparams hp) {
    if (inputs.size() != scores.size()) {
        throw std::invalid_argument("GaussianProcess: inputs and scores differ in length");
    }
    if (inputs.size() < 2) {
        throw std::invalid_argument("GaussianProcess: at least two observations are required");
    }
    const std::size_t dim = inputs.front().size();
    for (const auto& x : inputs) {
        if (x.size() != dim) throw std::invalid_argument("GaussianProcess: ragged inputs");
    }
    if (hp.length_scales.size() != dim) {
        throw std::invalid_argument("GaussianProcess: length-scale count does not match inputs");
    }
    for (double s : scores) {
        if (!std::isfinite(s)) throw std::invalid_argument("GaussianProcess: non-finite score");
    }

    GaussianProcess gp;
    gp.inputs_ = std::move(inputs);
    gp.scores_ = std::move(scores);
    gp.hp_ = std::move(hp);

    const auto n = static_cast<double>(gp.scores_.size());
    double mean = 0.0;
    for (double s : gp.scores_) mean += s;
    mean /= n;
    double var = 0.0;
    for (double s : gp.scores_) var += (s - mean) * (s - mean);
    var /= n;
    gp.y_mean_ = mean;
    gp.y_scale_ = var > 1e-24 ? std::sqrt(var) : 1.0;
    gp.y_std_.resize(static_cast<Eigen::Index>(gp.scores_.size()));
    for (std::size_t i = 0; i < gp.scores_.size(); ++i) {
        gp.y_std_(static_cast<Eigen::Index>(i)) = (gp.scores_[i] - gp.y_mean_) / gp.y_scale_;
    }
    gp.factorize();
    return gp;
}

void GaussianProcess::factorize() {
    // Duplicate inputs make the Gram matrix singular up to the noise term;
    // grow the jitter until the factorisation succeeds.
    for (int attempt = 0; attempt < 12; ++attempt) {
        chol_.compute(gram(inputs_, hp_));
        if (chol_.info() == Eigen::Success) break;
        hp_.noise_variance *= 10.0;
    }
    if (chol_.info() != Eigen::Success) {
        throw std::runtime_error("GaussianProcess: Gram matrix is not positive definite");
    }
    alpha_ = chol_.solve(y_std_);
    const Eigen::MatrixXd& l = chol_.matrixLLT();
    const double log_det = 2.0 * l.diagonal().array().log().sum();
    const auto n = static_cast<double>(y_std_.size());
    lml_ = -0.5 * y_std_.dot(alpha_) - 0.5 * log_det - 0.5 * n * std::log(2.0 * std::numbers::pi);

    incumbent_ = std::numeric_limits<double>::infinity();
    for (const auto& x : inputs_) incumbent_ = std::min(incumbent_, predict(x).mean);
}

GaussianProcess GaussianProcess::fit(std::vector<std::vector<double>> inputs,
                                     std::vector<double> scores, std::uint64_t seed,
                                     const GpFitOptions& options) {
    if (inputs.size() < 2) {
        throw std::invalid_argument("GaussianProcess: at least two observations are required");
    }
    const std::size_t dim = inputs.front().size();

    // Standardise once here for the likelihood search; condition() redoes it.
    GpHyperparams probe;
    probe.length_scales.assign(dim, 1.0);
    probe.noise_variance = options.noise_variance;
    const GaussianProcess base = condition(inputs, scores, probe);
    const Eigen::VectorXd& y = base.y_std_;

    const double lo_l = std::log(options.min_length_scale);
    const double hi_l = std::log(options.max_length_scale);
    const double lo_s = std::log(options.min_signal_variance);
    const double hi_s = std::log(options.max_signal_variance);

    // theta = (log length-scales..., log signal variance), clamped into bounds.
    auto unpack = [&](const std::vector<double>& theta) {
        GpHyperparams hp;
        hp.length_scales.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            hp.length_scales[i] = std::exp(std::clamp(theta[i], lo_l, hi_l));
        }
        hp.signal_variance = std::exp(std::clamp(theta[dim], lo_s, hi_s));
        hp.noise_variance = options.noise_variance;
        return hp;
    };
    auto objective = [&](const std::vector<double>& theta) {
        double penalty = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            penalty += std::pow(std::max(0.0, lo_l - theta[i]), 2) +
                       std::pow(std::max(0.0, theta[i] - hi_l), 2);
        }
        penalty += std::pow(std::max(0.0, lo_s - theta[dim]), 2) +
                   std::pow(std::max(0.0, theta[dim] - hi_s), 2);
        return negative_lml(base.inputs_, y, unpack(theta)) + penalty;
    };

    std::mt19937_64 rng(seed);
    std::vector<std::vector<double>> starts;
    starts.emplace_back(dim + 1, 0.0);
    for (std::size_t i = 0; i < dim; ++i) starts.back()[i] = std::log(0.5);
    for (int r = 0; r < options.restarts; ++r) {
        std::vector<double> theta(dim + 1);
        for (std::size_t i = 0; i < dim; ++i) theta[i] = lo_l + (hi_l - lo_l) * uniform01(rng);
        theta[dim] = std::log(0.2) + (std::log(5.0) - std::log(0.2)) * uniform01(rng);
        starts.push_back(std::move(theta));
    }

    NelderMeadOptions nm;
    nm.max_evaluations = options.max_evaluations;
    nm.initial_step = 0.5;
    nm.tolerance = 1e-8;
    NelderMeadResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        NelderMeadResult r = nelder_mead(objective, start, nm);
        if (r.value < best.value) best = std::move(r);
    }
    GpHyperparams hp = std::isfinite(best.value) ? unpack(best.x) : unpack(starts.front());
    return condition(std::move(inputs), std::move(scores), std::move(hp));
}

GpPrediction GaussianProcess::predict(const std::vector<double>& x) const {
    const auto n = static_cast<Eigen::Index>(inputs_.size());
    Eigen::VectorXd k(n);
    for (Eigen::Index i = 0; i < n; ++i) k(i) = matern52(inputs_[static_cast<std::size_t>(i)], x, hp_);
    const double mean = k.dot(alpha_);
    const Eigen::VectorXd v = chol_.matrixL().solve(k);
    const double var = std::max(0.0, hp_.signal_variance - v.squaredNorm());
    return {y_mean_ + y_scale_ * mean, var * y_scale_ * y_scale_};
}

double GaussianProcess::expected_improvement(const std::vector<double>& x) const {
    const GpPrediction p = predict(x);
    const double noise = hp_.noise_variance * y_scale_ * y_scale_;
    const double excess = p.variance > noise ? p.variance - noise : 0.0;
    return maskopt::expected_improvement(p.mean, excess, incumbent_);
}

}  // namespace maskopt
