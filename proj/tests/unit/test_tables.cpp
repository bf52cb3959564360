#include <gtest/gtest.h>

#include <cmath>

#include "levyhedge/hedge_continuous.hpp"
#include "levyhedge/hedge_discrete.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/payoffs.hpp"
#include "levyhedge/tables.hpp"
#include "oracle_values.hpp"

using namespace levyhedge;

namespace {

// tables interpolate a smooth function: compare against direct quadrature
// relative to the size of the quantity at the money
void expect_close(double table, double direct, double size, const char* what, double S)
{
    EXPECT_NEAR(table, direct, 1e-7 * size) << what << " at S = " << S;
}

} // namespace

TEST(Tables, DiscreteTablesMatchDirectQuadrature)
{
    for (const char* name : {"gaussian", "merton", "nig", "vg"}) {
        const auto c = hedge::coefficients(oracle::model(name), 0.25, 12);
        for (const auto& pi : {payoffs::call(99.0), payoffs::digital(99.0)}) {
            const tables::TabulatedDiscretePricer t(c, pi, 100.0);
            const hedge::DiscretePricer& d = t.direct();
            const double psize = std::abs(d.price(0, 100.0).value), xsize = std::abs(d.xi(1, 100.0).value);
            for (double S : {70.0, 93.3, 100.0, 104.1, 140.0}) {
                for (int n : {0, 5, 11}) expect_close(t.price(n, S).value, d.price(n, S).value, psize, name, S);
                for (int n : {1, 6, 12}) expect_close(t.xi(n, S).value, d.xi(n, S).value, xsize, name, S);
            }
        }
    }
}

TEST(Tables, ContinuousTablesMatchDirectQuadrature)
{
    const auto c = hedge::coefficients_ct(models::NIG{}, 0.25);
    const auto pi = payoffs::call(99.0);
    const tables::TabulatedContinuousPricer t(c, pi, 100.0, 0.25 / 12);
    const hedge::ContinuousPricer d(c, pi);
    for (double time : {0.0, 0.1, 0.2}) {
        for (double S : {80.0, 99.0, 121.0}) {
            expect_close(t.price(time, S).value, d.price(time, S).value, 5.0, "price", S);
            expect_close(t.xi(time, S).value, d.xi(time, S).value, 0.5, "xi", S);
        }
    }
    // at maturity the payoff itself is served
    EXPECT_NEAR(t.price(0.25, 120.0).value, 21.0, 1e-9);
}

TEST(Tables, OutsideTheWindowFallsBackToQuadrature)
{
    const auto c = hedge::coefficients(models::NIG{}, 0.25, 4);
    tables::TableOptions opts;
    opts.window = 0.2;
    const tables::TabulatedDiscretePricer t(c, payoffs::call(99.0), 100.0, {}, opts);
    const double far = 100.0 * std::exp(0.5);
    EXPECT_EQ(t.price(1, far).value, t.direct().price(1, far).value);
    EXPECT_EQ(t.xi(2, far).value, t.direct().xi(2, far).value);
}

TEST(Tables, PointMassesStayExact)
{
    const auto c = hedge::coefficients(models::NIG{}, 0.25, 4);
    const tables::TabulatedDiscretePricer t(c, payoffs::stock(), 100.0);
    for (double S : {90.0, 100.0, 111.0}) {
        EXPECT_NEAR(t.price(2, S).value, S, 1e-12 * S);
        EXPECT_NEAR(t.xi(2, S).value, 1.0, 1e-14);
    }
}

TEST(Tables, BuildOptionsAreValidated)
{
    const auto c = hedge::coefficients(models::NIG{}, 0.25, 4);
    tables::TableOptions bad;
    bad.window = 100.0;  // wider than the period allows
    const tables::TabulatedDiscretePricer t(c, payoffs::call(99.0), 100.0, {}, bad);
    EXPECT_THROW(t.price(0, 100.0), DomainError);
}
