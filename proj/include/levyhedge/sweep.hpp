#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "levyhedge/errors.hpp"
#include "levyhedge/hedge_continuous.hpp"
#include "levyhedge/hedge_discrete.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/payoffs.hpp"

namespace levyhedge::sweep {

enum class Axis { spot, trading_dates };
enum class Mode { discrete, continuous };

struct Setup {
    models::LevyModelSpec model;
    payoffs::TransformMeasure payoff;
    double S0 = 100.0;
    double T = 0.25;
    int N = 12;
    Mode mode = Mode::continuous;
    hedge::QuadratureSettings quadrature{};
};

/// One grid point. V0 and xi0 follow the mode; J0_gaussian_benchmark is the
/// discrete-trading J0 of the moment-matched Gaussian model at the row's N;
/// V0_gaussian and xi0_gaussian are the benchmark's values in the same mode.
struct Row {
    double axis = 0.0;
    double V0 = 0.0;
    double xi0 = 0.0;
    double J0_discrete = 0.0;
    double J0_continuous = 0.0;
    double J0_gaussian_benchmark = 0.0;
    double V0_gaussian = 0.0;
    double xi0_gaussian = 0.0;
};

inline const std::vector<std::string>& columns(Axis axis)
{
    static const std::vector<std::string> spot = {"spot",      "V0", "xi0", "J0_discrete", "J0_continuous",
                                                  "J0_gaussian_benchmark", "V0_gaussian", "xi0_gaussian"};
    static const std::vector<std::string> dates = {"trading_dates", "V0", "xi0", "J0_discrete", "J0_continuous",
                                                   "J0_gaussian_benchmark", "V0_gaussian", "xi0_gaussian"};
    return axis == Axis::spot ? spot : dates;
}

/// count equally spaced points from `from` to `to`; count = 0 gives an empty grid.
inline std::vector<double> linspace(double from, double to, long count)
{
    if (count < 0) throw DomainError("linspace: count must be non-negative");
    std::vector<double> g;
    g.reserve(static_cast<std::size_t>(count));
    for (long k = 0; k < count; ++k)
        g.push_back(count == 1 ? from : from + (to - from) * static_cast<double>(k) / static_cast<double>(count - 1));
    if (count > 1) g.back() = to;
    return g;
}

namespace detail {

inline double checked(const hedge::Evaluation& e, const char* what)
{
    if (!e.converged) throw QuadratureFailure(std::string(what) + ": quadrature did not converge");
    return e.value;
}

inline double checked(const hedge::ErrorVariance& e, const char* what)
{
    if (!e.converged) throw QuadratureFailure(std::string(what) + ": error-variance quadrature did not converge");
    return e.value;
}

struct ModeValues {
    double V0, xi0;
};

inline ModeValues mode_values(const models::LevyModelSpec& model, const Setup& s, double S0, int N)
{
    if (s.mode == Mode::continuous) {
        const hedge::ContinuousPricer p(hedge::coefficients_ct(model, s.T), s.payoff, s.quadrature);
        return {checked(p.price(0.0, S0), "V0"), checked(p.xi(0.0, S0), "xi0")};
    }
    const hedge::DiscretePricer p(hedge::coefficients(model, s.T, N), s.payoff, s.quadrature);
    return {checked(p.price(0, S0), "V0"), checked(p.xi(1, S0), "xi0")};
}

} // namespace detail

/// The data behind the price, hedge-ratio and error-versus-trades figures.
inline std::vector<Row> run(const Setup& s, Axis axis, const std::vector<double>& grid)
{
    const models::LevyModelSpec bench = models::gaussian_benchmark(s.model);
    const auto ct = hedge::coefficients_ct(s.model, s.T);
    std::vector<Row> rows;
    rows.reserve(grid.size());

    // quantities that do not depend on N are computed once per spot
    std::map<double, Row> per_spot;
    auto spot_part = [&](double S0) -> const Row& {
        auto it = per_spot.find(S0);
        if (it != per_spot.end()) return it->second;
        Row r;
        r.J0_continuous = detail::checked(hedge::error_variance_ct(ct, s.payoff, S0, s.quadrature), "J0_continuous");
        if (s.mode == Mode::continuous) {
            const auto v = detail::mode_values(s.model, s, S0, s.N);
            const auto g = detail::mode_values(bench, s, S0, s.N);
            r.V0 = v.V0;
            r.xi0 = v.xi0;
            r.V0_gaussian = g.V0;
            r.xi0_gaussian = g.xi0;
        }
        return per_spot.emplace(S0, r).first->second;
    };

    for (double value : grid) {
        double S0 = s.S0;
        int N = s.N;
        if (axis == Axis::spot) {
            if (!(value > 0.0) || !std::isfinite(value)) throw DomainError("sweep: spot values must be positive");
            S0 = value;
        } else {
            if (value != std::floor(value) || value < 1.0 || value > 1e6)
                throw DomainError("sweep: trading dates must be positive integers");
            N = static_cast<int>(value);
        }
        Row r = spot_part(S0);
        r.axis = value;
        if (s.mode == Mode::discrete) {
            const auto v = detail::mode_values(s.model, s, S0, N);
            const auto g = detail::mode_values(bench, s, S0, N);
            r.V0 = v.V0;
            r.xi0 = v.xi0;
            r.V0_gaussian = g.V0;
            r.xi0_gaussian = g.xi0;
        }
        r.J0_discrete = detail::checked(
            hedge::error_variance(hedge::coefficients(s.model, s.T, N), s.payoff, S0, s.quadrature), "J0_discrete");
        r.J0_gaussian_benchmark = detail::checked(
            hedge::error_variance(hedge::coefficients(bench, s.T, N), s.payoff, S0, s.quadrature),
            "J0_gaussian_benchmark");
        rows.push_back(r);
    }
    return rows;
}

} // namespace levyhedge::sweep
