#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "levyhedge/config.hpp"
#include "levyhedge/errors.hpp"
#include "levyhedge/hedge_continuous.hpp"
#include "levyhedge/hedge_discrete.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/payoffs.hpp"
#include "levyhedge/report.hpp"
#include "levyhedge/simulate.hpp"
#include "levyhedge/sweep.hpp"

namespace levyhedge::cli {

using report::Cell;
using report::Table;

/// A command's table plus the warnings meant for stderr.
struct Outcome {
    Table table;
    std::vector<std::string> warnings;
};

/// The parts of a RunConfig every command needs, validated.
struct Setup {
    models::LevyModelSpec model;
    payoffs::TransformMeasure payoff;
    bool continuous = true;
    double S0 = 100.0;
    double T = 0.25;
    int N = 12;
    std::optional<double> capital;
};

inline Setup setup(const config::RunConfig& cfg)
{
    Setup s;
    s.model = config::model(cfg);
    s.payoff = config::payoff(cfg);
    s.continuous = cfg.choice("hedge.mode", {"discrete", "continuous"}) == "continuous";
    s.S0 = cfg.positive("hedge.S0");
    s.T = cfg.positive("hedge.T");
    const auto N = cfg.integer("hedge.N");
    if (N < 1 || N > 100000) throw config::RunConfig::bad("hedge.N", "an integer in [1, 100000]", cfg.raw("hedge.N"));
    s.N = static_cast<int>(N);
    s.capital = cfg.real_opt("hedge.capital");

    const auto strip = models::strip_of_finiteness(s.model);
    if (!payoffs::abscissa_admissible(s.payoff, strip))
        throw ValidationError("config key 'payoff.abscissa': contour of " + s.payoff.label +
                              " is not admissible for the model strip (" + report::format_real(strip.lo) + ", " +
                              report::format_real(strip.hi) + ")");
    return s;
}

inline std::string mode_name(const Setup& s) { return s.continuous ? "continuous" : "discrete"; }

inline double converged(const hedge::Evaluation& e, const std::string& what)
{
    if (!e.converged) throw QuadratureFailure(what + ": quadrature budget exhausted without convergence");
    return e.value;
}

inline const hedge::ErrorVariance& converged(const hedge::ErrorVariance& e, const std::string& what)
{
    if (!e.converged) throw QuadratureFailure(what + ": quadrature budget exhausted without convergence");
    return e;
}

/// V0 with the admissibility verdict and a NEGATIVE-CAPITAL warning when V0 < 0.
inline Outcome cmd_price(const config::RunConfig& cfg)
{
    const Setup s = setup(cfg);
    hedge::Evaluation v;
    if (s.continuous) v = hedge::ContinuousPricer(hedge::coefficients_ct(s.model, s.T), s.payoff).price(0.0, s.S0);
    else v = hedge::DiscretePricer(hedge::coefficients(s.model, s.T, s.N), s.payoff).price(0, s.S0);
    const double V0 = converged(v, "V0");
    const auto strip = models::strip_of_finiteness(s.model);

    Outcome out;
    out.table.columns = {"mode",           "model",   "payoff",   "S0",       "T",  "N", "V0",
                         "error_estimate", "admissible", "strip_lo", "strip_hi", "negative_capital"};
    out.table.add({mode_name(s), std::string(models::tag(s.model)), s.payoff.label, s.S0, s.T,
                   static_cast<std::int64_t>(s.N), V0, v.error_estimate, true, strip.lo, strip.hi, V0 < 0.0});
    if (V0 < 0.0)
        out.warnings.push_back("NEGATIVE-CAPITAL: the variance-optimal initial capital V0 = " +
                               report::format_real(V0) + " is negative");
    return out;
}

/// xi and phi at `spot`; `at` is the trading date n in [1, N] (discrete) or
/// the time t in [0, T) (continuous). The wealth gap H - V0 - G defaults to 0.
inline Outcome cmd_hedge(const config::RunConfig& cfg, double spot, double at, std::optional<double> wealth_gap)
{
    const Setup s = setup(cfg);
    if (!(spot > 0.0) || !std::isfinite(spot)) throw ValidationError("hedge: --spot must be positive");
    const double gap = wealth_gap.value_or(0.0);
    if (!std::isfinite(gap)) throw ValidationError("hedge: --wealth-gap must be finite");
    double xi = 0.0, price = 0.0, lambda = 0.0;
    if (s.continuous) {
        if (!(at >= 0.0 && at < s.T)) throw ValidationError("hedge: --at must be a time in [0, hedge.T)");
        const hedge::ContinuousPricer p(hedge::coefficients_ct(s.model, s.T), s.payoff);
        xi = converged(p.xi(at, spot), "xi");
        price = converged(p.price(at, spot), "price");
        lambda = p.coefficients().lambda_feedback;
    } else {
        if (at != std::floor(at) || at < 1.0 || at > s.N)
            throw ValidationError("hedge: --at must be a trading date in [1, hedge.N]");
        const int n = static_cast<int>(at);
        const hedge::DiscretePricer p(hedge::coefficients(s.model, s.T, s.N), s.payoff);
        xi = converged(p.xi(n, spot), "xi");
        price = converged(p.price(n - 1, spot), "price");
        lambda = p.coefficients().lambda_feedback;
    }
    Outcome out;
    out.table.columns = {"mode", "spot", "at", "xi", "price", "wealth_gap", "lambda", "phi"};
    out.table.add({mode_name(s), spot, at, xi, price, gap, lambda, xi + lambda / spot * gap});
    return out;
}

/// J0 and its quadrature error estimate; with hedge.capital also the error of
/// the strategy started from that capital.
inline Outcome cmd_error(const config::RunConfig& cfg)
{
    const Setup s = setup(cfg);
    hedge::ErrorVariance ev;
    double V0 = 0.0, rho = 1.0;
    if (s.continuous) {
        const auto c = hedge::coefficients_ct(s.model, s.T);
        ev = converged(hedge::error_variance_ct(c, s.payoff, s.S0), "J0");
        V0 = converged(hedge::ContinuousPricer(c, s.payoff).price(0.0, s.S0), "V0");
        rho = std::exp(-hedge::mean_variance_tradeoff(c, s.T));
    } else {
        const auto c = hedge::coefficients(s.model, s.T, s.N);
        ev = converged(hedge::error_variance(c, s.payoff, s.S0), "J0");
        V0 = converged(hedge::DiscretePricer(c, s.payoff).price(0, s.S0), "V0");
        rho = std::pow(1.0 - c.lambda_feedback * c.m1_minus_1, c.N);
    }
    const double capital = s.capital.value_or(V0);
    Outcome out;
    out.table.columns = {"mode", "S0", "T", "N", "J0", "error_estimate", "raw", "nodes_used", "V0", "capital",
                         "error_at_capital"};
    out.table.add({mode_name(s), s.S0, s.T, static_cast<std::int64_t>(s.N), ev.value, ev.error_estimate, ev.raw,
                   static_cast<std::int64_t>(ev.nodes_used), V0, capital,
                   ev.value + (capital - V0) * (capital - V0) * rho});
    return out;
}

/// Monte Carlo backtest against the closed-form J0.
inline Outcome cmd_backtest(const config::RunConfig& cfg)
{
    const Setup s = setup(cfg);
    const auto paths = cfg.u64("mc.paths");
    if (paths < 2) throw config::RunConfig::bad("mc.paths", "at least 2", cfg.raw("mc.paths"));
    const auto seed = cfg.u64("mc.seed");
    simulate::BacktestOptions opts;
    opts.antithetic = cfg.boolean("mc.antithetic");
    if (opts.antithetic && paths % 2 != 0)
        throw config::RunConfig::bad("mc.paths", "an even count with mc.antithetic", cfg.raw("mc.paths"));
    if (!simulate::supports_sampling(s.model))
        throw ValidationError("config key 'model.tag': " + std::string(models::tag(s.model)) +
                              " paths cannot be simulated");

    simulate::BacktestReport r;
    if (s.continuous) {
        long steps = s.N;
        if (cfg.has("mc.steps")) steps = static_cast<long>(cfg.integer("mc.steps"));
        if (steps < 1 || steps > 100000)
            throw config::RunConfig::bad("mc.steps", "an integer in [1, 100000]", cfg.raw("mc.steps"));
        if (s.capital) throw ValidationError("config key 'hedge.capital': continuous backtests start from V0");
        r = simulate::backtest_continuous_approx(s.model, s.payoff, s.S0, s.T, static_cast<int>(steps), paths, seed,
                                                 opts);
    } else {
        r = simulate::backtest_discrete(s.model, s.payoff, s.S0, s.T, s.N, paths, seed, s.capital, opts);
    }
    Outcome out;
    out.table.columns = {"mode",           "model",        "payoff",      "n_paths",
                         "steps",          "seed",         "antithetic",  "approximation",
                         "initial_capital", "capital_used", "empirical_mean_error", "empirical_error_variance",
                         "std_error",      "predicted_J0", "z_score"};
    out.table.add({mode_name(s), std::string(models::tag(s.model)), s.payoff.label,
                   static_cast<std::int64_t>(r.n_paths), static_cast<std::int64_t>(r.steps), std::to_string(r.seed),
                   opts.antithetic, r.approximation, r.initial_capital, r.capital_used, r.empirical_mean_error,
                   r.empirical_error_variance, r.std_error, r.predicted_J0, r.z_score});
    return out;
}

/// Price, ratio and error curves over spot or over the number of trading dates.
inline Outcome cmd_sweep(const config::RunConfig& cfg)
{
    const Setup s = setup(cfg);
    const auto axis = cfg.choice("sweep.axis", {"spot", "trading_dates"}) == "spot" ? sweep::Axis::spot
                                                                                     : sweep::Axis::trading_dates;
    const auto count = cfg.integer("sweep.count");
    if (count < 0 || count > 100000)
        throw config::RunConfig::bad("sweep.count", "an integer in [0, 100000]", cfg.raw("sweep.count"));
    const auto grid = sweep::linspace(cfg.real("sweep.from"), cfg.real("sweep.to"), static_cast<long>(count));
    for (double v : grid) {
        if (axis == sweep::Axis::spot && !(v > 0.0))
            throw ValidationError("config keys sweep.from / sweep.to: spot values must be positive");
        if (axis == sweep::Axis::trading_dates && (v != std::floor(v) || v < 1.0))
            throw ValidationError("config keys sweep.from / sweep.to / sweep.count: trading dates must be "
                                  "positive integers");
    }
    sweep::Setup ss{s.model, s.payoff, s.S0, s.T, s.N,
                    s.continuous ? sweep::Mode::continuous : sweep::Mode::discrete, {}};
    Outcome out;
    out.table.columns = sweep::columns(axis);
    for (const auto& r : sweep::run(ss, axis, grid))
        out.table.add({r.axis, r.V0, r.xi0, r.J0_discrete, r.J0_continuous, r.J0_gaussian_benchmark, r.V0_gaussian,
                       r.xi0_gaussian});
    return out;
}

/// Inversion of the payoff's transform measure against its closed form.
inline Outcome cmd_payoff_check(const config::RunConfig& cfg)
{
    const auto pi = config::payoff(cfg);
    const double lo = cfg.positive("check.s_min");
    const double hi = cfg.positive("check.s_max");
    if (hi < lo) throw config::RunConfig::bad("check.s_max", "a value >= check.s_min", cfg.raw("check.s_max"));
    const auto points = cfg.integer("check.points");
    if (points < 0 || points > 1000000)
        throw config::RunConfig::bad("check.points", "an integer in [0, 1000000]", cfg.raw("check.points"));

    Outcome out;
    out.table.columns = {"s", "inverted", "analytic", "abs_error", "tolerance", "within_tolerance"};
    double worst = 0.0, worst_s = lo;
    if (!pi.payoff) throw ValidationError("config key 'payoff.kind': payoff has no closed form to check against");
    bool all_ok = true;
    for (double s : sweep::linspace(lo, hi, static_cast<long>(points))) {
        const auto inv = payoffs::invert(pi, s);
        const double f = pi.payoff(s);
        const double err = std::abs(inv.value - f);
        const double tol = 1e-6 * (1.0 + std::abs(f));
        all_ok = all_ok && err <= tol;
        if (!(err <= worst)) worst = err, worst_s = s;  // NaN sticks
        out.table.add({s, inv.value, f, err, tol, err <= tol});
    }
    out.warnings.push_back("payoff-check " + pi.label + ": max_abs_error = " + report::format_real(worst) +
                           " at s = " + report::format_real(worst_s) + (all_ok ? " (all within tolerance)" :
                                                                                 " (TOLERANCE EXCEEDED)"));
    return out;
}

} // namespace levyhedge::cli
