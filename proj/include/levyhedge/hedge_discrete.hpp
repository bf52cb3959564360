#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "levyhedge/errors.hpp"
#include "levyhedge/hedge_common.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/numerics.hpp"
#include "levyhedge/payoffs.hpp"

namespace levyhedge::hedge {

/// Step functions of the N-date problem with dt = T / N:
///   g(z) = (m(z+1) - m(1) m(z)) / (m(2) - m(1)^2),  h(z) = m(z) - (m(1) - 1) g(z),
///   lambda = (m(1) - 1) / (m(2) - 2 m(1) + 1).
/// Differences of moments are formed through expm1 of cumulant differences,
/// so nothing cancels when dt is small.
struct DiscreteHedgeCoefficients {
    models::LevyModelSpec model;
    double T = 0.0;
    int N = 0;
    double dt = 0.0;
    double k1 = 0.0;          // kappa(1)
    double k2 = 0.0;          // kappa(2)
    double m1 = 0.0;          // m(1)
    double m2 = 0.0;          // m(2)
    double m1_minus_1 = 0.0;  // m(1) - 1
    double e_var = 0.0;       // expm1((kappa(2) - 2 kappa(1)) dt) = (m(2) - m(1)^2) / m(1)^2
    double lambda_feedback = 0.0;
    double a_factor = 0.0;    // (m(2) - m(1)^2) / (m(2) - 2 m(1) + 1) = 1 - lambda (m(1) - 1)

    cplx kappa(cplx z) const { return models::cumulant(model, z); }
    cplx m(cplx z) const { return std::exp(kappa(z) * dt); }

    struct Values {
        cplx kappa;    // kappa(z)
        cplx m;        // m(z)
        cplx p;        // m(z) expm1((kappa(z+1) - kappa(z) - kappa(1)) dt) = (m(z+1) - m(1) m(z)) / m(1)
        cplx g;
        cplx h;
        double noise;  // rounding scale of p
    };

    Values values(cplx z) const
    {
        if (z == cplx{1.0, 0.0}) return {k1, m1, m1 * e_var, 1.0, 1.0, 0.0};
        const cplx kz = kappa(z);
        const cplx kn = kappa(z + 1.0);
        const cplx mz = std::exp(kz * dt);
        const cplx pz = mz * numerics::expm1((kn - kz - k1) * dt);
        const cplx gz = pz / (m1 * e_var);
        const double noise = dt * std::abs(std::exp((kn - k1) * dt)) * (std::abs(kn) + std::abs(kz) + std::abs(k1));
        return {kz, mz, pz, gz, mz - m1_minus_1 * gz, noise};
    }
    cplx g(cplx z) const { return values(z).g; }
    cplx h(cplx z) const { return values(z).h; }

    /// b(y, z) = m(y+z) - [m2 m(y)m(z) - m1 m(y+1)m(z) - m1 m(y)m(z+1) + m(y+1)m(z+1)] / (m2 - m1^2)
    ///         = m(y+z) - m(y)m(z) - p(y)p(z) / e_var
    cplx b(const Values& y, const Values& z, cplx kyz) const
    {
        const cplx delta = (kyz - y.kappa - z.kappa) * dt;
        const cplx myz = std::exp(kyz * dt);
        // expm1 form where m(y+z) and m(y)m(z) are close; the plain difference
        // where they are not, which also avoids 0 * inf far out on the lines
        const cplx first = delta.real() < 0.5 ? y.m * z.m * numerics::expm1(delta) : myz - y.m * z.m;
        const double scale = dt * std::abs(myz) * (std::abs(kyz) + std::abs(y.kappa) + std::abs(z.kappa)) +
                             (y.noise * std::abs(z.p) + z.noise * std::abs(y.p)) / e_var;
        return numerics::cancelling_difference(first, y.p * z.p / e_var, scale);
    }
    cplx b(cplx y, cplx z) const { return b(values(y), values(z), kappa(y + z)); }

    /// a(y, z) = h(y) h(z) (m2 - m1^2) / (m2 - 2 m1 + 1)
    cplx a(cplx y, cplx z) const { return h(y) * h(z) * a_factor; }

    /// J0(y, z) of the error variance, with the geometric sum in stable form.
    cplx j0_kernel(cplx y, cplx z, double S0) const
    {
        const Values vy = values(y), vz = values(z);
        const cplx kyz = kappa(y + z);
        const cplx a = vy.h * vz.h * a_factor;
        const cplx myz = std::exp(kyz * dt);
        return std::exp((y + z) * std::log(S0)) * b(vy, vz, kyz) *
               numerics::geometric_sum(a, myz, static_cast<unsigned>(N));
    }
};

inline DiscreteHedgeCoefficients coefficients(const models::LevyModelSpec& model, double T, int N)
{
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("coefficients: T must be positive");
    if (N < 1) throw DomainError("coefficients: N must be at least 1");
    const double dt = T / N;
    if (!models::no_arbitrage_check(model, dt))
        throw DegenerateModel("coefficients: model has no usable variance on dt = " + std::to_string(dt) +
                              " or its strip does not contain [0, 2]");
    DiscreteHedgeCoefficients c;
    c.model = model;
    c.T = T;
    c.N = N;
    c.dt = dt;
    c.k1 = models::cumulant(model, 1.0).real();
    c.k2 = models::cumulant(model, 2.0).real();
    c.m1 = std::exp(c.k1 * dt);
    c.m2 = std::exp(c.k2 * dt);
    c.m1_minus_1 = std::expm1(c.k1 * dt);
    c.e_var = std::expm1((c.k2 - 2.0 * c.k1) * dt);
    // m2 - 2 m1 + 1 = m1^2 e_var + (m1 - 1)^2
    const double var = c.m1 * c.m1 * c.e_var;
    const double denom = var + c.m1_minus_1 * c.m1_minus_1;
    c.lambda_feedback = c.m1_minus_1 / denom;
    c.a_factor = var / denom;
    return c;
}

/// Evaluates H_n and xi_n by direct quadrature, caching line truncations per step.
/// Not safe to share between threads (the caches are filled lazily).
class DiscretePricer {
public:
    DiscretePricer(DiscreteHedgeCoefficients coeffs, TransformMeasure measure, QuadratureSettings qs = {})
        : c_(std::move(coeffs)), pi_(std::move(measure)), qs_(qs), price_cuts_(c_.N + 1), xi_cuts_(c_.N + 1)
    {
        payoffs::validate(pi_);
        if (!payoffs::abscissa_admissible(pi_, models::strip_of_finiteness(c_.model)))
            throw StripViolation("payoff abscissas are not admissible for the model strip");
    }

    const DiscreteHedgeCoefficients& coefficients() const { return c_; }
    const TransformMeasure& measure() const { return pi_; }
    const QuadratureSettings& settings() const { return qs_; }

    /// h(z)^{N-n}, the weight of H_n
    cplx price_weight(int n, cplx z) const { return numerics::int_pow(c_.h(z), static_cast<unsigned>(c_.N - n)); }
    /// g(z) h(z)^{N-n}, the weight of xi_n
    cplx xi_weight(int n, cplx z) const
    {
        const auto v = c_.values(z);
        return v.g * numerics::int_pow(v.h, static_cast<unsigned>(c_.N - n));
    }

    /// H_n(S) = int S^z h(z)^{N-n} Pi(dz); H_N is the payoff itself.
    Evaluation price(int n, double S) const
    {
        check_step(n, 0, "price_process");
        check_spot(S);
        if (n == c_.N) {
            const auto inv = payoffs::invert(pi_, S);
            return {inv.value, inv.error_estimate, inv.converged};
        }
        auto w = [&](cplx z) { return price_weight(n, z); };
        return detail::integrate_against(pi_, w, S, 0.0, qs_, price_cuts_[n]);
    }

    /// xi_n(S_{n-1}) = int S_{n-1}^{z-1} g(z) h(z)^{N-n} Pi(dz), n in [1, N].
    Evaluation xi(int n, double S_prev) const
    {
        check_step(n, 1, "xi");
        check_spot(S_prev);
        auto w = [&](cplx z) { return xi_weight(n, z); };
        return detail::integrate_against(pi_, w, S_prev, -1.0, qs_, xi_cuts_[n]);
    }

private:
    void check_step(int n, int lo, const char* who) const
    {
        if (n < lo || n > c_.N)
            throw DomainError(std::string(who) + ": step " + std::to_string(n) + " outside [" + std::to_string(lo) +
                              ", " + std::to_string(c_.N) + "]");
    }
    static void check_spot(double S)
    {
        if (!(S > 0.0) || !std::isfinite(S)) throw DomainError("stock price must be positive and finite");
    }

    DiscreteHedgeCoefficients c_;
    TransformMeasure pi_;
    QuadratureSettings qs_;
    mutable std::vector<std::vector<double>> price_cuts_;
    mutable std::vector<std::vector<double>> xi_cuts_;
};

/// V0 = H_0(S0).
inline double initial_capital(const DiscreteHedgeCoefficients& c, const TransformMeasure& pi, double S0,
                              const QuadratureSettings& qs = {})
{
    return DiscretePricer(c, pi, qs).price(0, S0).value;
}

inline double price_process(const DiscreteHedgeCoefficients& c, const TransformMeasure& pi, double S, int n,
                            const QuadratureSettings& qs = {})
{
    return DiscretePricer(c, pi, qs).price(n, S).value;
}

inline double xi(const DiscreteHedgeCoefficients& c, const TransformMeasure& pi, double S_prev, int n,
                 const QuadratureSettings& qs = {})
{
    return DiscretePricer(c, pi, qs).xi(n, S_prev).value;
}

/// Online state of the feedback strategy: `step` trading periods are complete.
struct DiscreteHedgeState {
    int step = 0;
    double capital = 0.0;     // V0, or the fixed capital c
    double gains = 0.0;       // G_step
    double wealth_gap = 0.0;  // H_{n-1} - capital - G_{n-1} at the last decision
};

struct PhiDecision {
    double phi = 0.0;
    double xi = 0.0;
    double price = 0.0;  // H_{n-1}(S_{n-1})
    DiscreteHedgeState state;
};

/// Strategy state seeded with capital c instead of V0; c = V0 gives the
/// variance-optimal strategy.
inline DiscreteHedgeState risk_min_fixed_capital(double c)
{
    return DiscreteHedgeState{0, c, 0.0, 0.0};
}

/// phi_n = xi_n + (lambda / S_{n-1}) (H_{n-1} - capital - G_{n-1}), n = state.step + 1.
/// The returned state records the decision; settle() books the realized move.
template <class Pricer>
PhiDecision phi_step(const Pricer& pricer, const DiscreteHedgeState& state, double S_prev)
{
    const auto& c = pricer.coefficients();
    const int n = state.step + 1;
    if (n > c.N) throw DomainError("phi_step: all trading dates already used");
    PhiDecision d;
    d.price = pricer.price(n - 1, S_prev).value;
    d.xi = pricer.xi(n, S_prev).value;
    d.state = state;
    d.state.wealth_gap = d.price - state.capital - state.gains;
    d.phi = d.xi + c.lambda_feedback / S_prev * d.state.wealth_gap;
    return d;
}

/// Books the gain phi_n (S_n - S_{n-1}) and advances to the next date.
inline DiscreteHedgeState settle(const PhiDecision& d, double S_prev, double S_now)
{
    DiscreteHedgeState s = d.state;
    s.gains += d.phi * (S_now - S_prev);
    s.step += 1;
    return s;
}

/// E((c + G_N - H)^2) = J0 + (c - V0)^2 (1 - lambda (m1 - 1))^N for the strategy seeded with c.
inline double fixed_capital_error(const DiscreteHedgeCoefficients& c, double j0, double V0, double capital)
{
    const double rho = std::pow(1.0 - c.lambda_feedback * c.m1_minus_1, c.N);
    return j0 + (capital - V0) * (capital - V0) * rho;
}

/// J0 = int int J0(y, z) Pi(dy) Pi(dz), the variance of the hedging error.
inline ErrorVariance error_variance(const DiscreteHedgeCoefficients& c, const TransformMeasure& pi, double S0,
                                   const QuadratureSettings& qs = {})
{
    if (!(S0 > 0.0)) throw DomainError("error_variance: S0 must be positive");
    payoffs::validate(pi);
    if (!payoffs::abscissa_admissible(pi, models::strip_of_finiteness(c.model)))
        throw StripViolation("payoff abscissas are not admissible for the model strip");
    auto kernel = [&](cplx y, cplx z) { return c.j0_kernel(y, z, S0); };
    return detail::integrate_pairs(pi, kernel, qs);
}

} // namespace levyhedge::hedge
