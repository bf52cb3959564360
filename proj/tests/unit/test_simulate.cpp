#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

#include "levyhedge/errors.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/payoffs.hpp"
#include "levyhedge/simulate.hpp"
#include "oracle_values.hpp"

using namespace levyhedge;
using namespace levyhedge::simulate;

namespace {

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST(Simulate, PathsArePureFunctionsOfSeedAndIndex)
{
    const auto m = oracle::model("merton");
    const auto a = sample_path(m, 0.25, 12, 99, 5);
    const auto b = sample_path(m, 0.25, 12, 99, 5);
    const auto c = sample_path(m, 0.25, 12, 99, 6);
    EXPECT_EQ(a.log_prices, b.log_prices);
    EXPECT_NE(a.log_prices, c.log_prices);
    EXPECT_EQ(a.times.front(), 0.0);
    EXPECT_EQ(a.times.back(), 0.25);
    EXPECT_NO_THROW(a.validate());

    auto stream = simulate_paths(m, 100.0, 0.25, 12, 7, 99);
    PathGrid p;
    std::uint64_t count = 0;
    while (stream.next(p)) {
        if (count == 5) {
            EXPECT_EQ(p.log_prices, a.log_prices);
        }
        ++count;
    }
    EXPECT_EQ(count, 7u);
}

TEST(Simulate, AntitheticPairsMirrorTheGaussianPart)
{
    const auto g = models::Gaussian{0.05, 0.2};
    const auto up = sample_path(g, 1.0, 4, 3, 0, true);
    const auto down = sample_path(g, 1.0, 4, 3, 1, true);
    const double drift = (0.05 - 0.02) * 0.25;
    for (int k = 1; k <= 4; ++k) {
        const double du = up.log_prices[k] - up.log_prices[k - 1] - drift;
        const double dd = down.log_prices[k] - down.log_prices[k - 1] - drift;
        EXPECT_NEAR(du, -dd, 1e-15);
    }
    EXPECT_THROW(simulate_paths(g, 100.0, 1.0, 4, 3, 1, true), DomainError);
}

TEST(Simulate, RunningMomentsMergeLikeOnePass)
{
    RunningMoments all, left, right;
    for (int i = 0; i < 1000; ++i) {
        const double x = std::sin(i * 0.37) * 10.0 + i * 0.01;
        all.add(x);
        (i < 321 ? left : right).add(x);
    }
    left.merge(right);
    EXPECT_EQ(left.n, all.n);
    EXPECT_NEAR(left.mean, all.mean, 1e-12);
    EXPECT_NEAR(left.variance(), all.variance(), 1e-10);
}

TEST(Simulate, BacktestIsBitReproducible)
{
    const auto m = oracle::model("nig");
    const auto a = backtest_discrete(m, payoffs::call(99.0), 100.0, 0.25, 4, 2000, 5);
    const auto b = backtest_discrete(m, payoffs::call(99.0), 100.0, 0.25, 4, 2000, 5);
    EXPECT_TRUE(same_bits(a.empirical_error_variance, b.empirical_error_variance));
    EXPECT_TRUE(same_bits(a.empirical_mean_error, b.empirical_mean_error));
    EXPECT_TRUE(same_bits(a.std_error, b.std_error));
    const auto c = backtest_discrete(m, payoffs::call(99.0), 100.0, 0.25, 4, 2000, 6);
    EXPECT_FALSE(same_bits(a.empirical_error_variance, c.empirical_error_variance));
}

TEST(Simulate, BacktestAgreesWithClosedForm)
{
    // 20000 paths, checked at 4 standard errors
    for (const char* name : {"gaussian", "vg"}) {
        const auto r = backtest_discrete(oracle::model(name), payoffs::call(99.0), 100.0, 0.25, 12, 20000, 17);
        EXPECT_EQ(r.n_paths, 20000u);
        EXPECT_LT(std::abs(r.z_score), 4.0) << name << " emp " << r.empirical_error_variance << " pred "
                                           << r.predicted_J0;
        EXPECT_NEAR(r.empirical_mean_error, 0.0, 5.0 * std::sqrt(r.predicted_J0 / 20000.0));
    }
}

TEST(Simulate, TablesAndDirectQuadratureGiveTheSameBacktest)
{
    BacktestOptions direct;
    direct.use_tables = false;
    const auto m = oracle::model("merton");
    const auto a = backtest_discrete(m, payoffs::put(99.0), 100.0, 0.25, 4, 200, 9);
    const auto b = backtest_discrete(m, payoffs::put(99.0), 100.0, 0.25, 4, 200, 9, {}, direct);
    EXPECT_NEAR(a.empirical_error_variance, b.empirical_error_variance, 1e-6 * b.empirical_error_variance);
}

TEST(Simulate, AntitheticBacktestRuns)
{
    BacktestOptions opts;
    opts.antithetic = true;
    const auto r = backtest_discrete(oracle::model("gaussian"), payoffs::call(99.0), 100.0, 0.25, 4, 20000, 3, {},
                                     opts);
    EXPECT_EQ(r.n_paths, 20000u);
    EXPECT_LT(std::abs(r.z_score), 4.0);
}

TEST(Simulate, ContinuousApproximationIsFlagged)
{
    const auto r = backtest_continuous_approx(oracle::model("nig"), payoffs::call(99.0), 100.0, 0.25, 50, 2000, 1);
    EXPECT_TRUE(r.approximation);
    EXPECT_EQ(r.steps, 50);
    EXPECT_GT(r.empirical_error_variance, 0.0);
}

TEST(Simulate, HyperbolicCannotBeSampled)
{
    EXPECT_FALSE(supports_sampling(oracle::model("hyperbolic")));
    EXPECT_THROW(simulate_paths(oracle::model("hyperbolic"), 100.0, 1.0, 4, 10, 1), UnsupportedModel);
}
