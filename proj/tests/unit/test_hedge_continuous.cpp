#include <gtest/gtest.h>

#include <cmath>

#include "levyhedge/errors.hpp"
#include "levyhedge/hedge_continuous.hpp"
#include "levyhedge/hedge_discrete.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/payoffs.hpp"
#include "levyhedge/simulate.hpp"
#include "oracle_values.hpp"

using namespace levyhedge;
using namespace levyhedge::hedge;

TEST(ContinuousHedge, CoefficientIdentitiesAtOne)
{
    for (const char* name : {"gaussian", "merton", "nig", "vg", "hyperbolic"}) {
        const auto c = coefficients_ct(oracle::model(name), 0.25);
        EXPECT_EQ(c.gamma(1.0), cplx(1.0)) << name;
        EXPECT_EQ(c.eta(1.0), cplx(0.0)) << name;
        EXPECT_NEAR(std::abs(c.gamma(cplx{1.0, 1e-6}) - 1.0), 0.0, 1e-4) << name;
        const auto one = c.values(1.0);
        for (cplx y : {cplx{1.5, 3.0}, cplx{-0.5, -20.0}, cplx{0.5, 0.0}}) {
            const auto vy = c.values(y);
            EXPECT_EQ(c.beta(vy, one, c.kappa(y + 1.0)), cplx{}) << name << " " << y;
        }
    }
}

TEST(ContinuousHedge, BlackScholesPricesDeltasAndZeroError)
{
    for (double sigma : {0.1, 0.3}) {
        const auto c = coefficients_ct(models::Gaussian{0.07, sigma}, 0.5);
        for (double S : {80.0, 100.0, 125.0}) {
            const auto pi = payoffs::call(100.0);
            const ContinuousPricer p(c, pi);
            const double bs = oracle::bs_call(S, 100.0, 0.5, sigma);
            EXPECT_NEAR(p.price(0.0, S).value, bs, 1e-7 * bs) << sigma << " " << S;
            const double delta = oracle::bs_delta(S, 100.0, 0.5, sigma);
            EXPECT_NEAR(p.xi(0.0, S).value, delta, 1e-7 * delta) << sigma << " " << S;
            const double vt = oracle::bs_call(S, 100.0, 0.3, sigma);
            EXPECT_NEAR(p.price(0.2, S).value, vt, 1e-7 * vt);
            EXPECT_EQ(error_variance_ct(c, pi, S).value, 0.0);
        }
    }
}

TEST(ContinuousHedge, FigureConfiguration)
{
    const auto c = coefficients_ct(models::NIG{}, 0.25);
    const auto j0 = error_variance_ct(c, payoffs::call(99.0), 100.0);
    EXPECT_TRUE(j0.converged);
    EXPECT_NEAR(j0.value, 0.257, 0.02 * 0.257);
    const auto bench = coefficients_ct(models::gaussian_benchmark(models::NIG{}), 0.25);
    EXPECT_NEAR(initial_capital_ct(bench, payoffs::call(99.0), 100.0), 4.50, 0.01 * 4.50);
}

TEST(ContinuousHedge, MertonNegativeCapital)
{
    const auto c = coefficients_ct(models::Merton{0.01, 0.03, 0.01, 0.2, 0.02}, 1.0);
    const double V0 = initial_capital_ct(c, payoffs::call(110.0), 100.0);
    EXPECT_GE(V0, -0.135);
    EXPECT_LE(V0, -0.125);
}

TEST(ContinuousHedge, AbscissaInvarianceForTheCall)
{
    const auto c = coefficients_ct(models::NIG{}, 0.25);
    const ContinuousPricer ref(c, payoffs::call(99.0));
    const double V0 = ref.price(0.0, 100.0).value, xi = ref.xi(0.0, 100.0).value;
    const double J0 = error_variance_ct(c, payoffs::call(99.0), 100.0).value;
    for (double R : {1.25, 1.75}) {
        const auto pi = payoffs::call(99.0, R);
        const ContinuousPricer p(c, pi);
        EXPECT_NEAR(p.price(0.0, 100.0).value, V0, 1e-9 * V0) << R;
        EXPECT_NEAR(p.xi(0.0, 100.0).value, xi, 1e-9 * xi) << R;
        EXPECT_NEAR(error_variance_ct(c, pi, 100.0).value, J0, 1e-7 * J0) << R;
    }
}

TEST(ContinuousHedge, DiscreteEngineConvergesToContinuousPrices)
{
    const models::NIG m{};
    const double Vct = initial_capital_ct(coefficients_ct(m, 0.25), payoffs::call(99.0), 100.0);
    const double d1 = std::abs(initial_capital(coefficients(m, 0.25, 50), payoffs::call(99.0), 100.0) - Vct);
    const double d2 = std::abs(initial_capital(coefficients(m, 0.25, 400), payoffs::call(99.0), 100.0) - Vct);
    EXPECT_LT(d2, d1);
    EXPECT_LT(d2, 2e-3);
}

TEST(ContinuousHedge, MeanVarianceTradeoff)
{
    const auto c = coefficients_ct(models::Gaussian{0.1, 0.2}, 1.0);
    // kappa(1) = mu, D = sigma^2, so K_t = (mu / sigma)^2 t
    EXPECT_NEAR(mean_variance_tradeoff(c, 0.5), 0.25 * 0.5, 1e-14);
    EXPECT_NEAR(c.lambda_feedback, 0.1 / 0.04, 1e-13);
}

TEST(ContinuousHedge, ExplicitGainsEqualTheFeedbackRecursion)
{
    for (const char* name : {"merton", "nig", "vg"}) {
        const auto model = oracle::model(name);
        const auto c = coefficients_ct(model, 0.25);
        const ContinuousPricer p(c, payoffs::call(99.0));
        for (std::uint64_t i = 0; i < 3; ++i) {
            const auto path = simulate::sample_path(model, 0.25, 20, 11, i);
            const auto g = gains_explicit(p, path, 100.0);
            for (std::size_t k = 0; k < g.gains.size(); ++k)
                EXPECT_NEAR(g.gains[k], g.gains_recursion[k], 1e-9 * (1.0 + std::abs(g.gains_recursion[k])))
                    << name << " path " << i << " step " << k;
            EXPECT_EQ(g.hedge_ratios.size(), 20u);
        }
    }
}

TEST(ContinuousHedge, ForbiddenJumpIsReported)
{
    const auto c = coefficients_ct(models::Merton{0.3, 0.1, 1.0, 0.0, 0.1}, 1.0);
    const ContinuousPricer p(c, payoffs::call(100.0));
    // relative move dX = 1 / lambda makes 1 - lambda dX vanish
    PathGrid path;
    path.times = {0.0, 0.5, 1.0};
    path.log_prices = {0.0, std::log1p(1.0 / c.lambda_feedback), 0.1};
    EXPECT_THROW(gains_explicit(p, path, 100.0), ForbiddenJump);
    PathGrid bad;
    bad.times = {0.0, 0.5, 0.4};
    bad.log_prices = {0.0, 0.1, 0.1};
    EXPECT_THROW(gains_explicit(p, bad, 100.0), DomainError);
}

TEST(ContinuousHedge, InputValidation)
{
    EXPECT_THROW(coefficients_ct(models::NIG{}, 0.0), DomainError);
    EXPECT_THROW(coefficients_ct(models::Gaussian{0.0, 0.0}, 1.0), DegenerateModel);
    const ContinuousPricer p(coefficients_ct(models::NIG{}, 0.25), payoffs::call(99.0));
    EXPECT_THROW(p.price(0.3, 100.0), DomainError);
    EXPECT_THROW(p.xi(-0.1, 100.0), DomainError);
    EXPECT_NEAR(p.price(0.25, 120.0).value, 21.0, 1e-9);  // maturity returns the payoff
}
