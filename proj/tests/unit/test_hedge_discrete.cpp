#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "levyhedge/errors.hpp"
#include "levyhedge/hedge_discrete.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/payoffs.hpp"
#include "oracle_values.hpp"

using namespace levyhedge;
using namespace levyhedge::hedge;

namespace {

payoffs::TransformMeasure payoff(const std::string& kind)
{
    if (kind == "call") return payoffs::call(oracle::K);
    if (kind == "put") return payoffs::put(oracle::K);
    return payoffs::digital(oracle::K);
}

} // namespace

TEST(DiscreteHedge, OneStepMatchesLeastSquaresOracle)
{
    for (const auto& o : oracle::one_step()) {
        const auto c = coefficients(oracle::model(o.model), oracle::horizon(o.model), 1);
        const auto pi = payoff(o.payoff);
        const DiscretePricer p(c, pi);
        const auto v0 = p.price(0, oracle::S0);
        const auto xi1 = p.xi(1, oracle::S0);
        const auto j0 = error_variance(c, pi, oracle::S0);
        EXPECT_TRUE(v0.converged && xi1.converged && j0.converged);
        EXPECT_NEAR(v0.value, o.V0, 1e-9 * std::abs(o.V0)) << o.model << " " << o.payoff;
        EXPECT_NEAR(xi1.value, o.xi, 1e-9 * std::abs(o.xi)) << o.model << " " << o.payoff;
        EXPECT_NEAR(j0.value, o.J0, 1e-8 * o.J0) << o.model << " " << o.payoff;
    }
}

TEST(DiscreteHedge, StockIsHedgedPerfectly)
{
    const auto c = coefficients(models::NIG{}, 0.25, 12);
    const DiscretePricer p(c, payoffs::stock());
    EXPECT_NEAR(p.price(0, 100.0).value, 100.0, 1e-12);
    EXPECT_NEAR(p.xi(5, 87.0).value, 1.0, 1e-14);
    EXPECT_NEAR(error_variance(c, payoffs::stock(), 100.0).value, 0.0, 1e-12);
}

TEST(DiscreteHedge, CoefficientIdentitiesAtOne)
{
    for (const char* name : {"gaussian", "merton", "nig", "vg", "hyperbolic"}) {
        const auto c = coefficients(oracle::model(name), 0.25, 12);
        EXPECT_EQ(c.g(1.0), cplx(1.0)) << name;
        EXPECT_EQ(c.h(1.0), cplx(1.0)) << name;
        // values() at points next to 1 approach the exact ones
        EXPECT_NEAR(std::abs(c.g(cplx{1.0, 1e-7}) - 1.0), 0.0, 1e-5) << name;
        for (cplx y : {cplx{1.5, 3.0}, cplx{-0.5, -20.0}, cplx{0.5, 0.0}}) {
            EXPECT_EQ(c.b(y, 1.0), cplx{}) << name << " " << y;
            EXPECT_EQ(c.b(1.0, y), cplx{}) << name << " " << y;
        }
        EXPECT_NEAR(c.a_factor, 1.0 - c.lambda_feedback * c.m1_minus_1, 1e-14);
    }
}

TEST(DiscreteHedge, KernelIsContinuousAcrossBranchSwitches)
{
    // the b() branch switches at Re((kappa(y+z) - kappa(y) - kappa(z)) dt) = 1/2; scan far out.
    // Im y and Im z are multiples of 1/4 so that y + z is exact
    for (int N : {1, 12}) {
        const auto c = coefficients(models::NIG{}, 0.25, N);
        std::vector<cplx> k;
        const double h = 0.25;
        for (double v = 0.0; v <= 2000.0; v += h) k.push_back(c.j0_kernel({1.5, v}, {1.5, 0.75 - v}, 100.0));
        for (std::size_t i = 2; i + 2 < k.size(); ++i) {
            ASSERT_TRUE(std::isfinite(k[i].real()) && std::isfinite(k[i].imag())) << i;
            const double jump = std::abs(k[i + 1] - k[i]);
            const double around = std::max(std::abs(k[i] - k[i - 1]), std::abs(k[i + 2] - k[i + 1]));
            EXPECT_LE(jump, 4.0 * around + 1e-14 * std::abs(k[i])) << "N=" << N << " v=" << i * h;
        }
    }
}

TEST(DiscreteHedge, KernelStaysFiniteFarOutOnTheLines)
{
    const auto c = coefficients(models::Merton{0.05, 0.15, 2.0, -0.05, 0.08}, 0.25, 4);
    for (double v : {1e2, 1e3, 1e4, 1e5}) {
        for (cplx z : {cplx{1.5, v}, cplx{1.5, -v}, cplx{-0.5, v}}) {
            const cplx k = c.j0_kernel({1.5, v}, z, 100.0);
            EXPECT_TRUE(std::isfinite(k.real()) && std::isfinite(k.imag())) << v;
        }
    }
}

TEST(DiscreteHedge, AbscissaInvarianceForTheCall)
{
    const auto c = coefficients(models::NIG{}, 0.25, 12);
    const DiscretePricer ref(c, payoffs::call(99.0));
    const double V0 = ref.price(0, 100.0).value, xi = ref.xi(1, 100.0).value;
    const double J0 = error_variance(c, payoffs::call(99.0), 100.0).value;
    for (double R : {1.25, 1.75}) {
        const auto pi = payoffs::call(99.0, R);
        const DiscretePricer p(c, pi);
        EXPECT_NEAR(p.price(0, 100.0).value, V0, 1e-9 * V0) << R;
        EXPECT_NEAR(p.xi(1, 100.0).value, xi, 1e-9 * xi) << R;
        EXPECT_NEAR(error_variance(c, pi, 100.0).value, J0, 1e-7 * J0) << R;
    }
}

TEST(DiscreteHedge, PutCallParityOfPricesAndRatios)
{
    // H_call - H_put = S, so V0 and xi differ by S0 and 1, and J0 is equal
    const auto c = coefficients(models::VarianceGamma{2500.0, -5.0, 100.0, 0.2}, 0.25, 4);
    const DiscretePricer pc(c, payoffs::call(99.0)), pp(c, payoffs::put(99.0));
    EXPECT_NEAR(pc.price(2, 103.0).value - pp.price(2, 103.0).value, 103.0 - 99.0, 1e-9);
    EXPECT_NEAR(pc.xi(3, 97.0).value - pp.xi(3, 97.0).value, 1.0, 1e-10);
}

TEST(DiscreteHedge, FigureConfiguration)
{
    // N = 12 at S0 = 100, K = 99, T = 0.25: about 1.04 (NIG) and 0.83 (Gaussian benchmark)
    const auto nig = error_variance(coefficients(models::NIG{}, 0.25, 12), payoffs::call(99.0), 100.0);
    EXPECT_NEAR(nig.value, 1.04, 0.02 * 1.04);
    const auto bench = models::gaussian_benchmark(models::NIG{});
    const auto g = error_variance(coefficients(bench, 0.25, 12), payoffs::call(99.0), 100.0);
    EXPECT_NEAR(g.value, 0.83, 0.02 * 0.83);
}

TEST(DiscreteHedge, FixedCapitalErrorFormula)
{
    const auto c = coefficients(models::NIG{}, 0.25, 12);
    const double rho = std::pow(1.0 - c.lambda_feedback * c.m1_minus_1, 12);
    EXPECT_DOUBLE_EQ(fixed_capital_error(c, 1.0, 4.0, 5.0), 1.0 + rho);
    EXPECT_DOUBLE_EQ(fixed_capital_error(c, 1.0, 4.0, 4.0), 1.0);
    EXPECT_GT(rho, 0.0);
    EXPECT_LE(rho, 1.0);
}

TEST(DiscreteHedge, PhiStepAndSettle)
{
    const auto c = coefficients(models::NIG{}, 0.25, 4);
    const DiscretePricer p(c, payoffs::call(99.0));
    auto s = risk_min_fixed_capital(p.price(0, 100.0).value);
    const auto d = phi_step(p, s, 100.0);
    EXPECT_NEAR(d.state.wealth_gap, 0.0, 1e-12);  // capital V0 starts with no gap
    EXPECT_NEAR(d.phi, p.xi(1, 100.0).value, 1e-12);
    s = settle(d, 100.0, 102.0);
    EXPECT_EQ(s.step, 1);
    EXPECT_NEAR(s.gains, 2.0 * d.phi, 1e-14);
    const auto d2 = phi_step(p, s, 102.0);
    EXPECT_NEAR(d2.phi, d2.xi + c.lambda_feedback / 102.0 * (d2.price - s.capital - s.gains), 1e-14);
    for (int n = 2; n <= 4; ++n) s = settle(phi_step(p, s, 102.0), 102.0, 102.0);
    EXPECT_THROW(phi_step(p, s, 102.0), DomainError);
}

TEST(DiscreteHedge, InputValidation)
{
    EXPECT_THROW(coefficients(models::NIG{}, 0.25, 0), DomainError);
    EXPECT_THROW(coefficients(models::NIG{}, -1.0, 4), DomainError);
    EXPECT_THROW(coefficients(models::Gaussian{0.0, 0.0}, 0.25, 4), DegenerateModel);
    EXPECT_THROW(coefficients(models::VarianceGamma{0.9, 0.0, 1.0, 0.0}, 0.25, 4), InputError);
    const auto c = coefficients(models::VarianceGamma{2.5, 0.0, 1.0, 0.0}, 0.25, 4);  // strip (-2.24, 2.24)
    EXPECT_THROW(DiscretePricer(c, payoffs::call(99.0)), StripViolation);
    const DiscretePricer p(coefficients(models::NIG{}, 0.25, 4), payoffs::call(99.0));
    EXPECT_THROW(p.price(5, 100.0), DomainError);
    EXPECT_THROW(p.xi(0, 100.0), DomainError);
    EXPECT_THROW(p.price(0, -1.0), DomainError);
}
