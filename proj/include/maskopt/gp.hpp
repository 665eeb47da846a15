#pragma once

// Gaussian-process surrogate: Matérn-5/2 kernel with one length-scale per
// encoded column, zero prior mean on standardised scores, small fixed
// observation noise. Hyperparameters maximise the log marginal likelihood.

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace maskopt {

struct GpHyperparams {
    std::vector<double> length_scales;
    double signal_variance = 1.0;
    /// Noise variance in standardised units.
    double noise_variance = 1e-6;
};

/// k(x1, x2) = s^2 (1 + sqrt5 r + 5 r^2 / 3) exp(-sqrt5 r), r the scaled distance.
double matern52(const std::vector<double>& x1, const std::vector<double>& x2,
                const GpHyperparams& hp);

struct GpFitOptions {
    double noise_variance = 1e-6;
    int restarts = 3;  // random starts on top of the default start
    int max_evaluations = 150;
    double min_length_scale = 1e-2;
    double max_length_scale = 1e1;
    double min_signal_variance = 1e-2;
    double max_signal_variance = 1e2;
};

struct GpPrediction {
    double mean = 0.0;
    double variance = 0.0;
};

class GaussianProcess {
public:
    /// Fits hyperparameters. Needs at least two observations.
    static GaussianProcess fit(std::vector<std::vector<double>> inputs, std::vector<double> scores,
                               std::uint64_t seed, const GpFitOptions& options = {});

    /// Conditions on the data with the given hyperparameters, no fitting.
    static GaussianProcess condition(std::vector<std::vector<double>> inputs,
                                     std::vector<double> scores, GpHyperparams hp);

    /// Posterior of the latent function in score units.
    GpPrediction predict(const std::vector<double>& x) const;

    /// Expected improvement (minimisation) at x. The incumbent is the lowest
    /// posterior mean over the observed inputs, and variance at or below the
    /// observation-noise level is treated as zero.
    double expected_improvement(const std::vector<double>& x) const;

    double incumbent() const noexcept { return incumbent_; }
    const GpHyperparams& hyperparams() const noexcept { return hp_; }
    double log_marginal_likelihood() const noexcept { return lml_; }
    double score_mean() const noexcept { return y_mean_; }
    double score_scale() const noexcept { return y_scale_; }
    std::size_t size() const noexcept { return inputs_.size(); }

private:
    GaussianProcess() = default;
    void factorize();

    std::vector<std::vector<double>> inputs_;
    std::vector<double> scores_;
    GpHyperparams hp_;
    double y_mean_ = 0.0;
    double y_scale_ = 1.0;
    Eigen::VectorXd y_std_;
    Eigen::LLT<Eigen::MatrixXd> chol_;
    Eigen::VectorXd alpha_;
    double lml_ = 0.0;
    double incumbent_ = 0.0;
};

/// Closed-form EI for minimisation; zero when variance <= 0.
double expected_improvement(double mean, double variance, double incumbent);

}  // namespace maskopt
