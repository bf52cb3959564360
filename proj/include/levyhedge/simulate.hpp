#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "levyhedge/errors.hpp"
#include "levyhedge/hedge_continuous.hpp"
#include "levyhedge/hedge_discrete.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/path_grid.hpp"
#include "levyhedge/payoffs.hpp"
#include "levyhedge/random.hpp"
#include "levyhedge/tables.hpp"

namespace levyhedge::simulate {

using payoffs::TransformMeasure;

inline bool supports_sampling(const models::LevyModelSpec& model)
{
    return !std::holds_alternative<models::Hyperbolic>(model);
}

/// Path `index` on the uniform grid of `steps` periods. With antithetic
/// sampling, odd paths replay the generator of the preceding even path with
/// the Gaussian parts mirrored.
inline PathGrid sample_path(const models::LevyModelSpec& model, double T, int steps, std::uint64_t seed,
                            std::uint64_t index, bool antithetic = false)
{
    const bool mirror = antithetic && (index % 2 == 1);
    Rng rng = path_rng(seed, mirror ? index - 1 : index);
    const double dt = T / steps;
    PathGrid p;
    p.times.resize(steps + 1);
    p.log_prices.resize(steps + 1);
    p.times[0] = 0.0;
    p.log_prices[0] = 0.0;
    for (int k = 1; k <= steps; ++k) {
        p.times[k] = k == steps ? T : k * dt;
        p.log_prices[k] = p.log_prices[k - 1] + models::sample_increment(model, dt, rng, mirror ? -1.0 : 1.0);
    }
    return p;
}

/// Sequential source of i.i.d. paths, each a pure function of (seed, index).
class PathStream {
public:
    PathStream(models::LevyModelSpec model, double T, int steps, std::uint64_t n_paths, std::uint64_t seed,
               bool antithetic = false)
        : model_(std::move(model)), T_(T), steps_(steps), n_paths_(n_paths), seed_(seed), antithetic_(antithetic)
    {
        models::validate(model_);
        if (!supports_sampling(model_)) throw UnsupportedModel("simulate_paths: model cannot be sampled");
        if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("simulate_paths: T must be positive");
        if (steps < 1) throw DomainError("simulate_paths: steps must be at least 1");
        if (antithetic && n_paths % 2 != 0) throw DomainError("simulate_paths: antithetic sampling needs an even path count");
    }

    bool next(PathGrid& out)
    {
        if (next_ >= n_paths_) return false;
        out = sample_path(model_, T_, steps_, seed_, next_++, antithetic_);
        return true;
    }
    std::uint64_t size() const { return n_paths_; }
    std::uint64_t position() const { return next_; }

private:
    models::LevyModelSpec model_;
    double T_;
    int steps_;
    std::uint64_t n_paths_;
    std::uint64_t seed_;
    bool antithetic_;
    std::uint64_t next_ = 0;
};

inline PathStream simulate_paths(const models::LevyModelSpec& model, double S0, double T, int steps,
                                 std::uint64_t n_paths, std::uint64_t seed, bool antithetic = false)
{
    if (!(S0 > 0.0)) throw DomainError("simulate_paths: S0 must be positive");
    return PathStream(model, T, steps, n_paths, seed, antithetic);
}

/// One-pass mean and variance (Welford), mergeable across batches (Chan et al.).
struct RunningMoments {
    std::uint64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x)
    {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }
    void merge(const RunningMoments& o)
    {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
        const double d = o.mean - mean;
        const double total = na + nb;
        mean += d * nb / total;
        m2 += o.m2 + d * d * na * nb / total;
        n += o.n;
    }
    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

/// Hedging errors e = c + G_N - H: squared errors in `squared`, raw errors in `raw`.
/// With antithetic sampling each unit is the average over a pair.
struct ErrorAccumulator {
    RunningMoments squared;
    RunningMoments raw;
    std::uint64_t paths = 0;

    void add(double e, std::uint64_t weight_paths = 1)
    {
        squared.add(e * e);
        raw.add(e);
        paths += weight_paths;
    }
    void add_pair(double e1, double e2)
    {
        squared.add(0.5 * (e1 * e1 + e2 * e2));
        raw.add(0.5 * (e1 + e2));
        paths += 2;
    }
    void merge(const ErrorAccumulator& o)
    {
        squared.merge(o.squared);
        raw.merge(o.raw);
        paths += o.paths;
    }
};

struct BacktestReport {
    std::uint64_t n_paths = 0;
    double capital_used = 0.0;
    double initial_capital = 0.0;  // V0 of the engine
    double empirical_mean_error = 0.0;
    double empirical_error_variance = 0.0;  // mean of squared errors
    double std_error = 0.0;
    double predicted_J0 = 0.0;
    double z_score = 0.0;
    std::uint64_t seed = 0;
    int steps = 0;
    bool approximation = false;  // continuous-time strategy applied on a grid
};

struct BacktestOptions {
    bool antithetic = false;
    bool use_tables = true;
    hedge::QuadratureSettings quadrature{};
    tables::TableOptions tables{};
};

namespace detail {

inline double terminal_payoff(const TransformMeasure& m, double S)
{
    return m.payoff ? m.payoff(S) : payoffs::evaluate_payoff(m, S);
}

inline BacktestReport finish(const ErrorAccumulator& acc, BacktestReport r)
{
    r.n_paths = acc.paths;
    r.empirical_error_variance = std::max(acc.squared.mean, 0.0);
    r.empirical_mean_error = acc.raw.mean;
    r.std_error = acc.squared.n > 0 ? std::sqrt(acc.squared.variance() / static_cast<double>(acc.squared.n)) : 0.0;
    const double diff = r.empirical_error_variance - r.predicted_J0;
    r.z_score = r.std_error > 0.0 ? diff / r.std_error : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
    return r;
}

template <class PathError>
ErrorAccumulator run_paths(PathStream& stream, bool antithetic, PathError&& error_of)
{
    ErrorAccumulator acc;
    PathGrid p;
    while (stream.next(p)) {
        const double e = error_of(p);
        if (antithetic) {
            PathGrid q;
            stream.next(q);
            acc.add_pair(e, error_of(q));
        } else {
            acc.add(e);
        }
    }
    return acc;
}

} // namespace detail

/// Runs the feedback strategy with capital c (default V0) on simulated paths
/// and compares the mean squared hedging error with the closed-form J0.
inline BacktestReport backtest_discrete(const models::LevyModelSpec& model, const TransformMeasure& payoff, double S0,
                                        double T, int N, std::uint64_t n_paths, std::uint64_t seed,
                                        std::optional<double> capital = {}, const BacktestOptions& opts = {})
{
    if (!(S0 > 0.0)) throw DomainError("backtest_discrete: S0 must be positive");
    const auto coeffs = hedge::coefficients(model, T, N);
    PathStream stream(model, T, N, n_paths, seed, opts.antithetic);

    BacktestReport r;
    r.seed = seed;
    r.steps = N;
    const hedge::DiscretePricer direct(coeffs, payoff, opts.quadrature);
    r.initial_capital = direct.price(0, S0).value;
    r.capital_used = capital.value_or(r.initial_capital);
    r.predicted_J0 = hedge::error_variance(coeffs, payoff, S0, opts.quadrature).value;

    auto run = [&](const auto& pricer) {
        return detail::run_paths(stream, opts.antithetic, [&](const PathGrid& p) {
            auto state = hedge::risk_min_fixed_capital(r.capital_used);
            double S_prev = S0;
            for (int n = 1; n <= N; ++n) {
                const double S = S0 * std::exp(p.log_prices[n]);
                state = hedge::settle(hedge::phi_step(pricer, state, S_prev), S_prev, S);
                S_prev = S;
            }
            return r.capital_used + state.gains - detail::terminal_payoff(payoff, S_prev);
        });
    };
    const ErrorAccumulator acc =
        opts.use_tables ? run(tables::TabulatedDiscretePricer(coeffs, payoff, S0, opts.quadrature, opts.tables))
                        : run(direct);
    return detail::finish(acc, r);
}

/// The continuous-time strategy applied at `steps` equally spaced dates,
/// against the continuous-time J0 (exact only as steps grows).
inline BacktestReport backtest_continuous_approx(const models::LevyModelSpec& model, const TransformMeasure& payoff,
                                                 double S0, double T, int steps, std::uint64_t n_paths,
                                                 std::uint64_t seed, const BacktestOptions& opts = {})
{
    if (!(S0 > 0.0)) throw DomainError("backtest_continuous_approx: S0 must be positive");
    const auto coeffs = hedge::coefficients_ct(model, T);
    PathStream stream(model, T, steps, n_paths, seed, opts.antithetic);

    BacktestReport r;
    r.seed = seed;
    r.steps = steps;
    r.approximation = true;
    const hedge::ContinuousPricer direct(coeffs, payoff, opts.quadrature);
    r.initial_capital = direct.price(0.0, S0).value;
    r.capital_used = r.initial_capital;
    r.predicted_J0 = hedge::error_variance_ct(coeffs, payoff, S0, opts.quadrature).value;
    const double V0 = r.initial_capital;

    auto run = [&](const auto& pricer) {
        return detail::run_paths(stream, opts.antithetic, [&](const PathGrid& p) {
            double G = 0.0;
            double S_prev = S0;
            for (int k = 1; k <= steps; ++k) {
                const double t = p.times[k - 1];
                const double S = S0 * std::exp(p.log_prices[k]);
                const double phi =
                    hedge::phi_ct(coeffs, pricer.xi(t, S_prev).value, pricer.price(t, S_prev).value, S_prev, V0, G);
                G += phi * (S - S_prev);
                S_prev = S;
            }
            return V0 + G - detail::terminal_payoff(payoff, S_prev);
        });
    };
    const ErrorAccumulator acc =
        opts.use_tables
            ? run(tables::TabulatedContinuousPricer(coeffs, payoff, S0, T / steps, opts.quadrature, opts.tables))
            : run(direct);
    return detail::finish(acc, r);
}

} // namespace levyhedge::simulate
