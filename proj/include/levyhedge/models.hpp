#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "levyhedge/errors.hpp"
#include "levyhedge/numerics.hpp"
#include "levyhedge/random.hpp"

namespace levyhedge::models {

/// Geometric Brownian motion: kappa(z) = (mu - sigma^2/2) z + sigma^2 z^2 / 2.
struct Gaussian {
    double mu = 0.0;
    double sigma = 0.2;
};

/// Jump diffusion with normal log-jumps:
/// kappa(z) = mu z + sigma^2 z^2 / 2 + lambda (exp(nu z + tau^2 z^2 / 2) - 1).
struct Merton {
    double mu = 0.0;
    double sigma = 0.2;
    double jump_intensity = 0.0;  // lambda
    double jump_mean = 0.0;       // nu
    double jump_sd = 0.0;         // tau
};

/// Normal inverse Gaussian:
/// kappa(z) = mu z + delta (sqrt(alpha^2 - beta^2) - sqrt(alpha^2 - (beta + z)^2)).
struct NIG {
    double alpha = 75.49;
    double beta = -4.089;
    double delta = 3.024;
    double mu = -0.04;
};

/// Variance gamma: kappa(z) = mu z + delta log(alpha / (alpha - beta z - z^2 / 2)).
struct VarianceGamma {
    double alpha = 10.0;
    double beta = 0.0;
    double delta = 1.0;
    double mu = 0.0;
};

/// Hyperbolic: kappa(z) = mu z + log[ gamma K1(delta gamma_z) / (gamma_z K1(delta gamma)) ],
/// gamma_z = sqrt(alpha^2 - (beta + z)^2), gamma = gamma_0.
struct Hyperbolic {
    double alpha = 75.0;
    double beta = 0.0;
    double delta = 0.01;
    double mu = 0.0;
};

using LevyModelSpec = std::variant<Gaussian, Merton, NIG, VarianceGamma, Hyperbolic>;

/// Open interval of real p with E e^{p X_1} finite.
struct Strip {
    double lo;
    double hi;
    bool contains(double p) const { return p > lo && p < hi; }
};

inline std::string_view tag(const LevyModelSpec& model)
{
    return std::visit(
        [](const auto& m) -> std::string_view {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Gaussian>) return "gaussian";
            else if constexpr (std::is_same_v<T, Merton>) return "merton";
            else if constexpr (std::is_same_v<T, NIG>) return "nig";
            else if constexpr (std::is_same_v<T, VarianceGamma>) return "vg";
            else return "hyperbolic";
        },
        model);
}

namespace detail {

inline void require(bool ok, const std::string& what)
{
    if (!ok) throw DomainError(what);
}

inline bool finite(double x) { return std::isfinite(x); }

} // namespace detail

inline Strip strip_of_finiteness(const LevyModelSpec& model)
{
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        [&](const auto& m) -> Strip {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Gaussian> || std::is_same_v<T, Merton>) {
                return {-inf, inf};
            } else if constexpr (std::is_same_v<T, VarianceGamma>) {
                const double r = std::sqrt(m.beta * m.beta + 2.0 * m.alpha);
                return {-m.beta - r, -m.beta + r};
            } else {
                return {-m.alpha - m.beta, m.alpha - m.beta};
            }
        },
        model);
}

/// Throws DomainError for parameters outside the model's domain.
inline void validate(const LevyModelSpec& model)
{
    using detail::finite;
    using detail::require;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                require(finite(m.mu) && finite(m.sigma), "gaussian: parameters must be finite");
                require(m.sigma >= 0.0, "gaussian: sigma must be non-negative");
            } else if constexpr (std::is_same_v<T, Merton>) {
                require(finite(m.mu) && finite(m.sigma) && finite(m.jump_intensity) && finite(m.jump_mean) &&
                            finite(m.jump_sd),
                        "merton: parameters must be finite");
                require(m.sigma >= 0.0, "merton: sigma must be non-negative");
                require(m.jump_intensity >= 0.0, "merton: jump intensity must be non-negative");
                require(m.jump_sd >= 0.0, "merton: jump sd must be non-negative");
            } else if constexpr (std::is_same_v<T, VarianceGamma>) {
                require(finite(m.alpha) && finite(m.beta) && finite(m.delta) && finite(m.mu),
                        "vg: parameters must be finite");
                require(m.alpha > 0.0, "vg: alpha must be positive");
                require(m.delta > 0.0, "vg: delta must be positive");
                for (double p : {0.0, 1.0, 2.0})
                    require(m.alpha - m.beta * p - 0.5 * p * p > 0.0,
                            "vg: alpha - beta p - p^2/2 must be positive for p in {0, 1, 2}");
            } else {
                const char* name = std::is_same_v<T, NIG> ? "nig" : "hyperbolic";
                require(finite(m.alpha) && finite(m.beta) && finite(m.delta) && finite(m.mu),
                        std::string(name) + ": parameters must be finite");
                require(m.alpha > std::abs(m.beta), std::string(name) + ": alpha must exceed |beta|");
                require(m.delta > 0.0, std::string(name) + ": delta must be positive");
            }
        },
        model);
}

namespace detail {

inline cplx cumulant_unchecked(const Gaussian& m, cplx z)
{
    const double s2 = m.sigma * m.sigma;
    return (m.mu - 0.5 * s2) * z + 0.5 * s2 * z * z;
}

inline cplx cumulant_unchecked(const Merton& m, cplx z)
{
    const double s2 = m.sigma * m.sigma;
    const double t2 = m.jump_sd * m.jump_sd;
    cplx k = m.mu * z + 0.5 * s2 * z * z;
    if (m.jump_intensity != 0.0) k += m.jump_intensity * numerics::expm1(m.jump_mean * z + 0.5 * t2 * z * z);
    return k;
}

inline cplx cumulant_unchecked(const NIG& m, cplx z)
{
    // sqrt(a^2 - b^2) - sqrt(a^2 - (b+z)^2) rationalized; the two roots are close for small z
    const double a2 = m.alpha * m.alpha;
    const cplx bz = m.beta + z;
    return m.mu * z + m.delta * z * (2.0 * m.beta + z) / (std::sqrt(a2 - m.beta * m.beta) + std::sqrt(a2 - bz * bz));
}

inline cplx cumulant_unchecked(const VarianceGamma& m, cplx z)
{
    return m.mu * z - m.delta * numerics::log1p(-(m.beta * z + 0.5 * z * z) / m.alpha);
}

inline cplx cumulant_unchecked(const Hyperbolic& m, cplx z)
{
    // Each principal log below has an argument with positive real part inside
    // the strip, so the sum is the continuous logarithm of the transform.
    const double a2 = m.alpha * m.alpha;
    const cplx bz = m.beta + z;
    const cplx q = a2 - bz * bz;
    const double q0 = a2 - m.beta * m.beta;
    const cplx w = m.delta * std::sqrt(q);
    const cplx w0 = m.delta * std::sqrt(q0);
    return m.mu * z - 0.5 * numerics::log1p(-z * (2.0 * m.beta + z) / q0) +
           (numerics::log_bessel_k1(w) - numerics::log_bessel_k1(w0));
}

} // namespace detail

/// Levy exponent kappa(z) = log E exp(z X_1), Re z strictly inside the strip.
inline cplx cumulant(const LevyModelSpec& model, cplx z)
{
    return std::visit(
        [&](const auto& m) -> cplx {
            const Strip s = strip_of_finiteness(model);
            if (!s.contains(z.real()))
                throw StripViolation("cumulant: Re z = " + std::to_string(z.real()) + " outside the strip (" +
                                     std::to_string(s.lo) + ", " + std::to_string(s.hi) + ")");
            return detail::cumulant_unchecked(m, z);
        },
        model);
}

/// E exp(z X_dt) = exp(dt kappa(z)).
inline cplx mgf_step(const LevyModelSpec& model, cplx z, double dt)
{
    return std::exp(dt * cumulant(model, z));
}

/// Per-unit-time mean and variance of the log-return X_1.
struct LogMoments {
    double mean;
    double variance;
};

inline LogMoments log_moments(const LevyModelSpec& model)
{
    return std::visit(
        [&](const auto& m) -> LogMoments {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                return {m.mu - 0.5 * m.sigma * m.sigma, m.sigma * m.sigma};
            } else if constexpr (std::is_same_v<T, Merton>) {
                const double l = m.jump_intensity;
                return {m.mu + l * m.jump_mean,
                        m.sigma * m.sigma + l * (m.jump_mean * m.jump_mean + m.jump_sd * m.jump_sd)};
            } else if constexpr (std::is_same_v<T, NIG>) {
                const double g = std::sqrt(m.alpha * m.alpha - m.beta * m.beta);
                return {m.mu + m.delta * m.beta / g, m.delta * m.alpha * m.alpha / (g * g * g)};
            } else if constexpr (std::is_same_v<T, VarianceGamma>) {
                return {m.mu + m.delta * m.beta / m.alpha,
                        m.delta * (m.alpha + m.beta * m.beta) / (m.alpha * m.alpha)};
            } else {
                // complex-step first derivative, five-point second derivative
                constexpr double hs = 1e-20;
                const double mean = detail::cumulant_unchecked(m, cplx{0.0, hs}).imag() / hs;
                const double h = 1e-3 * std::min(1.0, m.alpha - std::abs(m.beta));
                auto k = [&](double x) { return detail::cumulant_unchecked(m, cplx{x, 0.0}).real(); };
                const double var = (-k(2 * h) + 16 * k(h) - 30 * k(0.0) + 16 * k(-h) - k(-2 * h)) / (12 * h * h);
                return {mean, var};
            }
        },
        model);
}

/// Geometric Brownian motion with the same per-unit-time log-return mean and variance.
inline Gaussian gaussian_benchmark(const LevyModelSpec& model)
{
    const LogMoments lm = log_moments(model);
    Gaussian g;
    g.sigma = std::sqrt(lm.variance);
    g.mu = lm.mean + 0.5 * lm.variance;
    return g;
}

/// True when the model supports variance-optimal hedging on step dt: the strip
/// contains [0, 2] and the one-step return variance m(2) - m(1)^2 is not
/// negligible relative to m(1)^2.
inline bool no_arbitrage_check(const LevyModelSpec& model, double dt)
{
    validate(model);
    if (!(dt > 0.0)) throw DomainError("no_arbitrage_check: dt must be positive");
    const Strip s = strip_of_finiteness(model);
    if (!(s.lo < 0.0 && s.hi > 2.0)) return false;
    const double k1 = cumulant(model, 1.0).real();
    const double k2 = cumulant(model, 2.0).real();
    return std::expm1((k2 - 2.0 * k1) * dt) > 1e-12;
}

namespace detail {

// Inverse Gaussian with given mean and shape (Michael, Schucany and Haas).
inline double sample_inverse_gaussian(double mean, double shape, Rng& rng)
{
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    const double n = normal(rng);
    const double y = n * n;
    const double my = mean * y;
    // smaller root written as mean^2 / larger root to avoid cancellation
    const double larger = mean + mean * my / (2.0 * shape) +
                          mean / (2.0 * shape) * std::sqrt(4.0 * mean * shape * y + my * my);
    const double x = mean * mean / larger;
    return uniform(rng) <= mean / (mean + x) ? x : mean * mean / x;
}

} // namespace detail

/// One log-return increment X_dt. gaussian_sign = -1 mirrors the Gaussian
/// part (diffusion, or the conditional normal of a subordinated model) for
/// antithetic pairs; every other draw is unchanged.
inline double sample_increment(const LevyModelSpec& model, double dt, Rng& rng, double gaussian_sign = 1.0)
{
    if (!(dt > 0.0)) throw DomainError("sample_increment: dt must be positive");
    return std::visit(
        [&](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            std::normal_distribution<double> normal;
            if constexpr (std::is_same_v<T, Gaussian>) {
                return (m.mu - 0.5 * m.sigma * m.sigma) * dt + gaussian_sign * m.sigma * std::sqrt(dt) * normal(rng);
            } else if constexpr (std::is_same_v<T, Merton>) {
                double x = m.mu * dt + gaussian_sign * m.sigma * std::sqrt(dt) * normal(rng);
                if (m.jump_intensity > 0.0) {
                    std::poisson_distribution<int> jumps(m.jump_intensity * dt);
                    const int n = jumps(rng);
                    for (int j = 0; j < n; ++j) x += m.jump_mean + m.jump_sd * normal(rng);
                }
                return x;
            } else if constexpr (std::is_same_v<T, NIG>) {
                const double g = std::sqrt(m.alpha * m.alpha - m.beta * m.beta);
                const double dd = m.delta * dt;
                const double y = detail::sample_inverse_gaussian(dd / g, dd * dd, rng);
                return m.mu * dt + m.beta * y + gaussian_sign * std::sqrt(y) * normal(rng);
            } else if constexpr (std::is_same_v<T, VarianceGamma>) {
                std::gamma_distribution<double> gamma(m.delta * dt, 1.0 / m.alpha);
                const double g = gamma(rng);
                return m.mu * dt + m.beta * g + gaussian_sign * std::sqrt(g) * normal(rng);
            } else {
                throw UnsupportedModel("sample_increment: sampling from the hyperbolic model is not supported");
                return 0.0;
            }
        },
        model);
}

} // namespace levyhedge::models
