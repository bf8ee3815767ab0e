#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "failsim/error.hpp"
#include "failsim/parallel.hpp"
#include "failsim/stochastic.hpp"
#include "oracles/quadrature.hpp"

using namespace failsim;

TEST(GammaCdf, ZeroAtOrigin) { EXPECT_EQ(gamma_cdf(0.0, 2.0, 1.2), 0.0); }

TEST(GammaCdf, NegativeLevelIsZero) { EXPECT_EQ(gamma_cdf(-3.0, 2.0, 1.2), 0.0); }

TEST(GammaCdf, ShapeOneIsExponential) { EXPECT_NEAR(gamma_cdf(1.0, 1.0, 1.0), 1.0 - std::exp(-1.0), 1e-15); }

TEST(GammaCdf, SpoolShapeMatchesQuadrature)
{
    const double oracle = oracle::gamma_cdf_by_quadrature(5.0, 5.0, 1.2);
    EXPECT_NEAR(gamma_cdf(5.0, 5.0, 1.2), oracle, 1e-8);
    // frozen high-precision value of P(5, 6)
    EXPECT_NEAR(gamma_cdf(5.0, 5.0, 1.2), 0.71494349968336878, 1e-13);
}

TEST(GammaCdf, ExtremeShapesMatchFrozenValues)
{
    EXPECT_NEAR(gamma_cdf(0.5, 1e-3, 1.0), 0.99943993334352925, 1e-10);
    EXPECT_NEAR(gamma_cdf(10050.0, 1e4, 1.0), 0.69234244070256556, 1e-10);
}

TEST(GammaCdf, LargeShapeTinyLevelUnderflowsToZero)
{
    for (double x : {1e-300, 1e-20, 1e-10, 1e-3, 48.0})
        EXPECT_EQ(gamma_cdf(x, 5000.0, 1.2), 0.0) << x;
    EXPECT_GT(gamma_cdf(3500.0, 5000.0, 1.2), 0.0);
}

TEST(GammaCdf, QuadratureAgreementAcrossShapes)
{
    for (double shape : {1.0, 1.5, 3.0, 12.0})
        for (double x : {0.2, 1.0, 4.0, 9.0})
            EXPECT_NEAR(gamma_cdf(x, shape, 0.8), oracle::gamma_cdf_by_quadrature(x, shape, 0.8), 1e-9)
                << "shape=" << shape << " x=" << x;
}

TEST(GammaCdf, RejectsBadArguments)
{
    EXPECT_THROW(gamma_cdf(1.0, 0.0, 1.0), DomainError);
    EXPECT_THROW(gamma_cdf(1.0, 1.0, -1.0), DomainError);
    EXPECT_THROW(gamma_cdf(1.0, std::numeric_limits<double>::infinity(), 1.0), DomainError);
    EXPECT_THROW(gamma_cdf(std::nan(""), 1.0, 1.0), DomainError);
}

TEST(GammaCdfProperty, NondecreasingInLevel)
{
    for (double shape : {1e-3, 0.5, 5.0, 200.0})
    {
        double previous = 0.0;
        for (int k = 0; k <= 400; ++k)
        {
            const double x = 0.05 * k * (1.0 + shape / 10.0);
            const double p = gamma_cdf(x, shape, 1.2);
            EXPECT_GE(p, previous);
            previous = p;
        }
    }
}

TEST(GammaCdfProperty, NonincreasingInShapeAtFixedScaledLevel)
{
    for (double scaled : {0.1, 1.0, 5.0, 30.0})
    {
        double previous = 1.0;
        for (double shape = 0.01; shape < 60.0; shape *= 1.3)
        {
            const double p = gamma_cdf(scaled / 1.2, shape, 1.2);
            EXPECT_LE(p, previous + 1e-15);
            previous = p;
        }
    }
}

TEST(GammaCdfProperty, TendsToOne)
{
    for (double shape : {1e-3, 1.0, 50.0, 1e4})
        EXPECT_NEAR(gamma_cdf(shape * 10.0 + 1000.0, shape, 1.0), 1.0, 1e-9);
    EXPECT_EQ(gamma_cdf(std::numeric_limits<double>::infinity(), 2.0, 1.0), 1.0);
}

TEST(GammaPath, ZeroHorizonIsSinglePoint)
{
    RandomStream rng(1);
    const SampledPath path = sample_gamma_path({0.5, 1.2}, 0.0, 10, rng);
    ASSERT_EQ(path.values.size(), 1u);
    EXPECT_EQ(path.values[0], 0.0);
}

TEST(GammaPath, ZeroStepsRejected)
{
    RandomStream rng(1);
    EXPECT_THROW(sample_gamma_path({0.5, 1.2}, 10.0, 0, rng), DomainError);
}

TEST(GammaPath, StartsAtZeroAndNondecreasing)
{
    RandomStream rng(7);
    for (int rep = 0; rep < 50; ++rep)
    {
        const SampledPath path = sample_gamma_path({0.5, 1.2}, 10.0, 500, rng);
        ASSERT_EQ(path.values.size(), 501u);
        EXPECT_EQ(path.values.front(), 0.0);
        EXPECT_DOUBLE_EQ(path.horizon(), 10.0);
        for (std::size_t k = 1; k < path.values.size(); ++k)
            ASSERT_LE(path.values[k - 1], path.values[k]);
    }
}

TEST(GammaPath, EndpointMeanMatchesAnalyticMean)
{
    const GammaProcessParams params{0.5, 1.2};
    const int runs = 100000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int r = 0; r < runs; ++r)
    {
        RandomStream rng(2024, static_cast<std::uint64_t>(r));
        const double x = sample_gamma_path(params, 10.0, 4, rng).values.back();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / runs;
    const double se = std::sqrt((sum_sq / runs - mean * mean) / runs);
    EXPECT_NEAR(mean, params.mean_at(10.0), 3.0 * se);
    EXPECT_NEAR(params.mean_at(10.0), 4.1666666666666667, 1e-12);
}

TEST(GammaPath, EndpointFollowsGammaLaw)
{
    // empirical CDF of X(10) against gamma_cdf(., alpha*10, beta)
    const GammaProcessParams params{0.5, 1.2};
    const int runs = 20000;
    std::vector<double> ends;
    for (int r = 0; r < runs; ++r)
    {
        RandomStream rng(99, static_cast<std::uint64_t>(r));
        ends.push_back(sample_gamma_path(params, 10.0, 20, rng).values.back());
    }
    for (double level : {2.0, 4.0, 6.0, 9.0})
    {
        double below = 0.0;
        for (double x : ends)
            below += x <= level ? 1.0 : 0.0;
        below /= runs;
        const double p = gamma_cdf(level, 5.0, 1.2);
        EXPECT_NEAR(below, p, 4.0 * std::sqrt(p * (1 - p) / runs)) << "level " << level;
    }
}

TEST(GammaPathProperty, ReproducibleAcrossRunsAndWorkers)
{
    auto draw_all = [](std::size_t threads) {
        std::vector<std::vector<double>> paths(64);
        parallel_for(paths.size(), threads, [&](std::size_t i) {
            RandomStream rng(31337, i);
            paths[i] = sample_gamma_path({0.2, 1.6}, 7.5, 300, rng).values;
        });
        return paths;
    };
    const auto serial = draw_all(1);
    EXPECT_EQ(serial, draw_all(1));
    EXPECT_EQ(serial, draw_all(3));
    EXPECT_EQ(serial, draw_all(8));
}
