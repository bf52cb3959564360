#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "levyhedge/errors.hpp"
#include "levyhedge/numerics/complex_math.hpp"

namespace levyhedge::numerics {

namespace detail {

constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// Ascending series for K1, fine for |w| <= 2.
inline cplx bessel_k1_series(cplx w)
{
    const cplx q = 0.25 * w * w;
    cplx term = 1.0;        // q^k / (k! (k+1)!)
    cplx i_sum = 0.0;
    cplx psi_sum = 0.0;
    double harmonic = 0.0;  // H_k
    for (int k = 0; k < 60; ++k) {
        if (k > 0) {
            term *= q / (static_cast<double>(k) * static_cast<double>(k + 1));
            harmonic += 1.0 / k;
        }
        const double psi = -2.0 * euler_gamma + 2.0 * harmonic + 1.0 / (k + 1);
        i_sum += term;
        psi_sum += psi * term;
        if (std::abs(term) < 1e-18 * std::abs(i_sum)) break;
    }
    const cplx i1 = 0.5 * w * i_sum;
    return 1.0 / w + std::log(0.5 * w) * i1 - 0.25 * w * psi_sum;
}

// Steed's continued fraction (CF2, order 0) giving e^w K1(w); |w| > 2, Re w > 0.
inline cplx bessel_k1_scaled_cf2(cplx x)
{
    constexpr double eps = 1e-16;
    cplx b = 2.0 * (1.0 + x);
    cplx d = 1.0 / b;
    cplx h = d;
    cplx delh = d;
    cplx q1 = 0.0;
    cplx q2 = 1.0;
    const double a1 = 0.25;
    cplx q = a1;
    cplx c = a1;
    double a = -a1;
    cplx s = 1.0 + q * delh;
    for (int i = 1; i < 10000; ++i) {
        a -= 2.0 * i;
        c = -a * c / (i + 1.0);
        const cplx qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const cplx dels = q * delh;
        s += dels;
        if (std::abs(dels) < eps * std::abs(s)) break;
    }
    h *= a1;
    const cplx k0 = std::sqrt(pi / (2.0 * x)) / s;
    return k0 * (x + 0.5 - h) / x;
}

inline void require_right_half_plane(cplx w, const char* who)
{
    if (!(w.real() > 0.0) || !std::isfinite(w.real()) || !std::isfinite(w.imag()))
        throw DomainError(std::string(who) + ": argument must have positive real part");
}

} // namespace detail

/// Modified Bessel function of the second kind, order 1, for Re w > 0.
inline cplx bessel_k1(cplx w)
{
    detail::require_right_half_plane(w, "bessel_k1");
    if (std::abs(w) <= 2.0) return detail::bessel_k1_series(w);
    return detail::bessel_k1_scaled_cf2(w) * std::exp(-w);
}

/// e^w K1(w), for Re w > 0; free of overflow/underflow for large |w|.
inline cplx bessel_k1_scaled(cplx w)
{
    detail::require_right_half_plane(w, "bessel_k1_scaled");
    if (std::abs(w) <= 2.0) return detail::bessel_k1_series(w) * std::exp(w);
    return detail::bessel_k1_scaled_cf2(w);
}

/// A logarithm of K1 that is continuous on the right half-plane:
/// log(e^w K1(w)) - w, where e^w K1(w) stays off the negative real axis.
inline cplx log_bessel_k1(cplx w)
{
    return std::log(bessel_k1_scaled(w)) - w;
}

namespace detail {

inline bool is_nonpositive_integer(cplx z)
{
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

inline cplx stirling_log_gamma(cplx z)
{
    // Bernoulli B_{2k} / (2k (2k-1))
    static constexpr double coef[] = {
        1.0 / 12.0,           -1.0 / 360.0,       1.0 / 1260.0,          -1.0 / 1680.0,
        1.0 / 1188.0,         -691.0 / 360360.0,  1.0 / 156.0,           -3617.0 / 122400.0,
    };
    const cplx zinv = 1.0 / z;
    const cplx z2inv = zinv * zinv;
    cplx series = 0.0;
    cplx p = zinv;
    for (double c : coef) {
        series += c * p;
        p *= z2inv;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * pi) + series;
}

} // namespace detail

/// log Gamma(z): the analytic continuation from the positive real axis with
/// its branch cut on (-inf, 0] (real for real z > 0).
inline cplx log_gamma(cplx z)
{
    if (detail::is_nonpositive_integer(z))
        throw PoleError("log_gamma: pole at non-positive integer " + std::to_string(z.real()));
    constexpr double threshold = 15.0;
    if (z.real() >= 0.0 && std::abs(z) >= threshold) return detail::stirling_log_gamma(z);
    const int shift = static_cast<int>(std::ceil(threshold - z.real()));
    cplx correction = 0.0;
    for (int k = 0; k < shift; ++k) correction += std::log(z + static_cast<double>(k));
    return detail::stirling_log_gamma(z + static_cast<double>(shift)) - correction;
}

namespace detail {

// log sin(pi w) on some branch (only exp of the result matters).
inline cplx log_sin_pi(cplx w)
{
    // sin(pi w) has period 2 in Re w
    const double re = w.real() - 2.0 * std::round(0.5 * w.real());
    const cplx x{re, w.imag()};
    if (x.imag() >= 0.0) {
        return std::log(cplx{0.0, 0.5}) - I * pi * x + log1p(-std::exp(2.0 * pi * I * x));
    }
    return std::log(cplx{0.0, -0.5}) + I * pi * x + log1p(-std::exp(-2.0 * pi * I * x));
}

// log Gamma(w) modulo 2 pi i; reflection for Re w < 1/2.
inline cplx log_gamma_mod(cplx w)
{
    if (w.real() >= 0.5) return log_gamma(w);
    if (is_nonpositive_integer(w))
        throw PoleError("beta: Gamma pole at non-positive integer " + std::to_string(w.real()));
    return std::log(pi) - log_sin_pi(w) - log_gamma(1.0 - w);
}

} // namespace detail

/// Euler beta function B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b).
inline cplx beta(cplx a, cplx b)
{
    const cplx ab = a + b;
    if (detail::is_nonpositive_integer(ab) && !detail::is_nonpositive_integer(a) &&
        !detail::is_nonpositive_integer(b))
        throw PoleError("beta: a + b at a Gamma pole");
    return std::exp(detail::log_gamma_mod(a) + detail::log_gamma_mod(b) - detail::log_gamma_mod(ab));
}

/// Logarithms of a sequence of nonzero values sampled along a path, with the
/// branch chosen continuously from the principal log of the first value.
/// Throws DiscretizationError when two neighbours differ in argument by pi or
/// more (the sampling is too coarse to follow the branch).
inline std::vector<cplx> continuous_log(std::span<const cplx> values)
{
    std::vector<cplx> out;
    out.reserve(values.size());
    for (std::size_t k = 0; k < values.size(); ++k) {
        const cplx v = values[k];
        if (v == 0.0 || !std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("continuous_log: zero or non-finite value at index " + std::to_string(k));
        if (k == 0) {
            out.push_back(std::log(v));
            continue;
        }
        const double step = std::arg(v / values[k - 1]);
        if (std::abs(step) >= pi * (1.0 - 1e-12))
            throw DiscretizationError("continuous_log: argument jump of pi at index " + std::to_string(k));
        out.push_back({std::log(std::abs(v)), out.back().imag() + step});
    }
    return out;
}

} // namespace levyhedge::numerics
