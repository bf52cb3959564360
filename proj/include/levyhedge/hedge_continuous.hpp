#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "levyhedge/errors.hpp"
#include "levyhedge/hedge_common.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/numerics.hpp"
#include "levyhedge/path_grid.hpp"
#include "levyhedge/payoffs.hpp"

namespace levyhedge::hedge {

/// Continuous-time limit: gamma(z) = (kappa(z+1) - kappa(z) - kappa(1)) / D,
/// eta(z) = kappa(z) - kappa(1) gamma(z), lambda = kappa(1) / D,
/// with D = kappa(2) - 2 kappa(1).
struct ContinuousHedgeCoefficients {
    models::LevyModelSpec model;
    double T = 0.0;
    double k1 = 0.0;
    double k2 = 0.0;
    double D = 0.0;
    double lambda_feedback = 0.0;

    cplx kappa(cplx z) const { return models::cumulant(model, z); }

    struct Values {
        cplx kappa;
        cplx cov;  // kappa(z+1) - kappa(z) - kappa(1)
        cplx gamma;
        cplx eta;
        double size;  // |kappa(z+1)| + |kappa(z)| + |kappa(1)|, rounding scale of cov
    };

    Values values(cplx z) const
    {
        if (z == cplx{1.0, 0.0}) return {k1, D, 1.0, 0.0, 0.0};
        const cplx kz = kappa(z);
        const cplx kn = kappa(z + 1.0);
        const cplx cov = kn - kz - k1;
        const cplx g = cov / D;
        return {kz, cov, g, kz - k1 * g, std::abs(kn) + std::abs(kz) + std::abs(k1)};
    }
    cplx gamma(cplx z) const { return values(z).gamma; }
    cplx eta(cplx z) const { return values(z).eta; }

    /// alpha(y, z) = eta(y) + eta(z) - kappa(1)^2 / D
    cplx alpha(const Values& y, const Values& z) const { return y.eta + z.eta - k1 * k1 / D; }
    /// beta(y, z) = kappa(y+z) - kappa(y) - kappa(z) - cov(y) cov(z) / D
    cplx beta(const Values& y, const Values& z, cplx kyz) const
    {
        const double scale = std::abs(kyz) + std::abs(y.kappa) + std::abs(z.kappa) +
                             (y.size * std::abs(z.cov) + z.size * std::abs(y.cov)) / D;
        return numerics::cancelling_difference(kyz - y.kappa - z.kappa, y.cov * z.cov / D, scale);
    }

    /// J0(y, z) = S0^{y+z} beta (e^{alpha T} - e^{kappa(y+z) T}) / (alpha - kappa(y+z))
    cplx j0_kernel(cplx y, cplx z, double S0) const
    {
        const Values vy = values(y), vz = values(z);
        const cplx kyz = kappa(y + z);
        return std::exp((y + z) * std::log(S0)) * beta(vy, vz, kyz) *
               numerics::exp_difference_quotient(alpha(vy, vz), kyz, T);
    }
};

inline ContinuousHedgeCoefficients coefficients_ct(const models::LevyModelSpec& model, double T)
{
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("coefficients_ct: T must be positive");
    models::validate(model);
    const auto strip = models::strip_of_finiteness(model);
    if (!(strip.lo < 0.0 && strip.hi > 2.0))
        throw DegenerateModel("coefficients_ct: strip of finiteness does not contain [0, 2]");
    ContinuousHedgeCoefficients c;
    c.model = model;
    c.T = T;
    c.k1 = models::cumulant(model, 1.0).real();
    c.k2 = models::cumulant(model, 2.0).real();
    c.D = c.k2 - 2.0 * c.k1;
    if (!(c.D > 1e-12)) throw DegenerateModel("coefficients_ct: kappa(2) - 2 kappa(1) is not positive");
    c.lambda_feedback = c.k1 / c.D;
    return c;
}

/// K_t = (kappa(1)^2 / D) t, the mean-variance tradeoff process.
inline double mean_variance_tradeoff(const ContinuousHedgeCoefficients& c, double t)
{
    return c.k1 * c.k1 / c.D * t;
}

/// H_t and xi_t by direct quadrature, with line truncations cached per time.
/// Not safe to share between threads.
class ContinuousPricer {
public:
    ContinuousPricer(ContinuousHedgeCoefficients coeffs, TransformMeasure measure, QuadratureSettings qs = {})
        : c_(std::move(coeffs)), pi_(std::move(measure)), qs_(qs)
    {
        payoffs::validate(pi_);
        if (!payoffs::abscissa_admissible(pi_, models::strip_of_finiteness(c_.model)))
            throw StripViolation("payoff abscissas are not admissible for the model strip");
    }

    const ContinuousHedgeCoefficients& coefficients() const { return c_; }
    const TransformMeasure& measure() const { return pi_; }

    /// H_t(S) = int S^z e^{eta(z)(T - t)} Pi(dz)
    Evaluation price(double t, double S) const
    {
        check(t, S);
        if (t == c_.T) {
            const auto inv = payoffs::invert(pi_, S);
            return {inv.value, inv.error_estimate, inv.converged};
        }
        const double tau = c_.T - t;
        auto w = [&](cplx z) { return std::exp(c_.eta(z) * tau); };
        return detail::integrate_against(pi_, w, S, 0.0, qs_, cuts(price_cuts_, t));
    }

    /// xi_t(S) = int S^{z-1} gamma(z) e^{eta(z)(T - t)} Pi(dz)
    Evaluation xi(double t, double S) const
    {
        check(t, S);
        const double tau = c_.T - t;
        auto w = [&](cplx z) {
            const auto v = c_.values(z);
            return v.gamma * std::exp(v.eta * tau);
        };
        return detail::integrate_against(pi_, w, S, -1.0, qs_, cuts(xi_cuts_, t));
    }

private:
    void check(double t, double S) const
    {
        if (!(t >= 0.0 && t <= c_.T)) throw DomainError("time " + std::to_string(t) + " outside [0, T]");
        if (!(S > 0.0) || !std::isfinite(S)) throw DomainError("stock price must be positive and finite");
    }
    static std::vector<double>& cuts(std::vector<std::pair<double, std::vector<double>>>& cache, double t)
    {
        for (auto& [time, v] : cache)
            if (time == t) return v;
        cache.push_back({t, {}});
        return cache.back().second;
    }

    ContinuousHedgeCoefficients c_;
    TransformMeasure pi_;
    QuadratureSettings qs_;
    mutable std::vector<std::pair<double, std::vector<double>>> price_cuts_;
    mutable std::vector<std::pair<double, std::vector<double>>> xi_cuts_;
};

inline double initial_capital_ct(const ContinuousHedgeCoefficients& c, const TransformMeasure& pi, double S0,
                                 const QuadratureSettings& qs = {})
{
    return ContinuousPricer(c, pi, qs).price(0.0, S0).value;
}

inline double price_process_ct(const ContinuousHedgeCoefficients& c, const TransformMeasure& pi, double S,
                               double t, const QuadratureSettings& qs = {})
{
    return ContinuousPricer(c, pi, qs).price(t, S).value;
}

inline double xi_ct(const ContinuousHedgeCoefficients& c, const TransformMeasure& pi, double S, double t,
                    const QuadratureSettings& qs = {})
{
    return ContinuousPricer(c, pi, qs).xi(t, S).value;
}

/// phi_t = xi_t(S_{t-}) + (lambda / S_{t-}) (H_{t-} - V0 - G_{t-})
inline double phi_ct(const ContinuousHedgeCoefficients& c, double xi_value, double price_value, double S_prev,
                     double V0, double gains_prev)
{
    return xi_value + c.lambda_feedback / S_prev * (price_value - V0 - gains_prev);
}

/// J0 = int int J0(y, z) Pi(dy) Pi(dz) for continuous trading.
inline ErrorVariance error_variance_ct(const ContinuousHedgeCoefficients& c, const TransformMeasure& pi, double S0,
                                      const QuadratureSettings& qs = {})
{
    if (!(S0 > 0.0)) throw DomainError("error_variance_ct: S0 must be positive");
    payoffs::validate(pi);
    if (!payoffs::abscissa_admissible(pi, models::strip_of_finiteness(c.model)))
        throw StripViolation("payoff abscissas are not admissible for the model strip");
    auto kernel = [&](cplx y, cplx z) { return c.j0_kernel(y, z, S0); };
    return detail::integrate_pairs(pi, kernel, qs);
}

/// Gains of the continuous strategy applied on a time grid, in two forms.
struct GainsPathResult {
    std::vector<double> times;
    std::vector<double> gains;            // product formula
    std::vector<double> gains_recursion;  // G_k = G_{k-1} + phi_k (S_k - S_{k-1})
    std::vector<double> hedge_ratios;     // phi_k, k = 1..n
    std::vector<double> price_process;    // H at each grid time
};

/// With dX~_k = S_k / S_{k-1} - 1 and A_k = xi S_{k-1} + lambda (H_{k-1} - V0),
///   G_n = E_n sum_k A_k dY_k / E_{k-1},  E_n = prod_{j<=n} (1 - lambda dX~_j),
///   dY_k = dX~_k / (1 - lambda dX~_k).
/// Throws ForbiddenJump when a jump makes 1 - lambda dX~ vanish.
template <class Pricer>
GainsPathResult gains_explicit(const Pricer& pricer, const PathGrid& path, double S0)
{
    path.validate();
    if (!(S0 > 0.0)) throw DomainError("gains_explicit: S0 must be positive");
    const auto& c = pricer.coefficients();
    if (std::abs(path.times.back() - c.T) > 1e-12 * c.T)
        throw DomainError("gains_explicit: path must end at maturity");
    const double lambda = c.lambda_feedback;
    const std::size_t n = path.size();
    GainsPathResult out;
    out.times = path.times;
    out.times.back() = c.T;
    out.gains.assign(n, 0.0);
    out.gains_recursion.assign(n, 0.0);
    out.price_process.assign(n, 0.0);
    out.hedge_ratios.reserve(n - 1);
    const double V0 = pricer.price(0.0, S0).value;
    out.price_process[0] = V0;
    double E = 1.0;    // E_{k-1}
    double acc = 0.0;  // sum_{j<k} A_j dY_j / E_{j-1}
    double S_prev = S0;
    for (std::size_t k = 1; k < n; ++k) {
        const double S = S0 * std::exp(path.log_prices[k]);
        const double H_prev = out.price_process[k - 1];
        const double xi_prev = pricer.xi(out.times[k - 1], S_prev).value;
        const double dX = std::expm1(path.log_prices[k] - path.log_prices[k - 1]);
        const double f = 1.0 - lambda * dX;
        if (std::abs(f) < 1e-12)
            throw ForbiddenJump("gains_explicit: relative jump " + std::to_string(dX) +
                                " makes 1 - lambda dX vanish");
        const double A = xi_prev * S_prev + lambda * (H_prev - V0);
        acc += A * (dX / f) / E;
        E *= f;
        out.gains[k] = E * acc;

        const double phi = phi_ct(c, xi_prev, H_prev, S_prev, V0, out.gains_recursion[k - 1]);
        out.hedge_ratios.push_back(phi);
        out.gains_recursion[k] = out.gains_recursion[k - 1] + phi * (S - S_prev);
        out.price_process[k] = pricer.price(out.times[k], S).value;
        S_prev = S;
    }
    return out;
}

} // namespace levyhedge::hedge
