#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "maskopt/gp.hpp"
#include "oracles.hpp"

namespace maskopt {
namespace {

using Inputs = std::vector<std::vector<double>>;

TEST(Matern52, MatchesDefinition) {
    GpHyperparams hp{{0.3, 0.7}, 1.7, 1e-6};
    const std::vector<double> a{0.1, 0.9}, b{0.4, 0.2};
    EXPECT_NEAR(matern52(a, b, hp), static_cast<double>(oracle::matern(a, b, hp.length_scales, 1.7)), 1e-14);
    EXPECT_DOUBLE_EQ(matern52(a, a, hp), 1.7);
}

TEST(GaussianProcess, InterpolatesNoiseFreeQuadratic) {
    Inputs x{{0.0}, {0.25}, {0.5}, {0.75}, {1.0}};
    std::vector<double> y;
    for (const auto& p : x) y.push_back((p[0] - 0.3) * (p[0] - 0.3));
    const GaussianProcess gp = GaussianProcess::fit(x, y, 1);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(gp.predict(x[i]).mean, y[i], 1e-3);
}

TEST(GaussianProcess, ConstantScoresGiveConstantMean) {
    Inputs x{{0.1, 0.2}, {0.5, 0.5}, {0.9, 0.3}, {0.2, 0.8}};
    const std::vector<double> y(4, 42.5);
    const GaussianProcess gp = GaussianProcess::fit(x, y, 3);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    for (int i = 0; i < 200; ++i) EXPECT_NEAR(gp.predict({u(rng), u(rng)}).mean, 42.5, 1e-6);
}

TEST(GaussianProcess, IdenticalInputsAreJittered) {
    Inputs x{{0.5}, {0.5}, {0.5}};
    const GaussianProcess gp = GaussianProcess::fit(x, {1.0, 2.0, 3.0}, 0);
    const GpPrediction p = gp.predict({0.5});
    EXPECT_TRUE(std::isfinite(p.mean));
    EXPECT_TRUE(std::isfinite(p.variance));
}

TEST(GaussianProcess, RequiresTwoObservations) {
    EXPECT_THROW(GaussianProcess::fit({{0.1}}, {1.0}, 0), std::invalid_argument);
}

TEST(GaussianProcess, VarianceGrowsAwayFromData) {
    Inputs x{{0.2}, {0.3}, {0.4}};
    const GaussianProcess gp = GaussianProcess::fit(x, {1.0, 0.5, 0.8}, 5);
    for (const auto& p : x) EXPECT_LE(gp.predict(p).variance, gp.predict({p[0] + 0.5}).variance);
}

TEST(GaussianProcess, MatchesDenseOracle) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int problem = 0; problem < 20; ++problem) {
        const std::size_t dim = 1 + problem % 4;
        Inputs x(10, std::vector<double>(dim));
        std::vector<double> y(10);
        for (auto& p : x)
            for (double& v : p) v = u(rng);
        for (std::size_t i = 0; i < 10; ++i) y[i] = 50.0 + 100.0 * u(rng);
        GpHyperparams hp;
        for (std::size_t d = 0; d < dim; ++d) hp.length_scales.push_back(0.2 + u(rng));
        hp.signal_variance = 0.5 + u(rng);
        const GaussianProcess gp = GaussianProcess::condition(x, y, hp);
        for (int q = 0; q < 20; ++q) {
            std::vector<double> at(dim);
            for (double& v : at) v = u(rng);
            const auto dense = oracle::dense_gp(x, y, hp.length_scales, hp.signal_variance, hp.noise_variance, at);
            const GpPrediction p = gp.predict(at);
            EXPECT_NEAR(p.mean, dense.mean, 1e-6);
            EXPECT_NEAR(p.variance, std::max(0.0, dense.variance), 1e-6);
        }
    }
}

TEST(ExpectedImprovement, ClosedFormProperties) {
    EXPECT_EQ(expected_improvement(1.0, 0.0, 2.0), 1.0);
    EXPECT_EQ(expected_improvement(3.0, 0.0, 2.0), 0.0);
    // Zero-mean gap: EI = sigma * phi(0).
    EXPECT_NEAR(expected_improvement(0.0, 4.0, 0.0), 2.0 / std::sqrt(2.0 * M_PI), 1e-12);
    EXPECT_GE(expected_improvement(100.0, 1e-3, 0.0), 0.0);
}

TEST(ExpectedImprovement, NonNegativeAndVanishesAtObservedBest) {
    Inputs x{{0.1, 0.1}, {0.4, 0.8}, {0.9, 0.5}, {0.6, 0.2}, {0.3, 0.6}};
    std::vector<double> y;
    for (const auto& p : x) y.push_back(std::pow(p[0] - 0.37, 2) + std::pow(p[1] - 0.1, 2));
    const GaussianProcess gp = GaussianProcess::fit(x, y, 8);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 10000; ++i) ASSERT_GE(gp.expected_improvement({u(rng), u(rng)}), 0.0);
    const auto best = std::min_element(y.begin(), y.end()) - y.begin();
    EXPECT_LE(gp.expected_improvement(x[static_cast<std::size_t>(best)]), 1e-9);
}

}  // namespace
}  // namespace maskopt
