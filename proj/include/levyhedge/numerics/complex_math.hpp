#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace levyhedge {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

namespace numerics {

/// exp(w) - 1 without cancellation for small |w|.
inline cplx expm1(cplx w)
{
    const double x = w.real();
    const double y = w.imag();
    if (y == 0.0) return {std::expm1(x), 0.0};
    const double s = std::sin(0.5 * y);
    return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

/// log(1 + w), principal branch, accurate for small |w| (Kahan's trick).
inline cplx log1p(cplx w)
{
    const cplx u = 1.0 + w;
    if (u == 1.0) return w;
    const cplx d = u - 1.0;
    return std::log(u) * (w / d);
}

/// z^n for a non-negative integer n by repeated squaring.
inline cplx int_pow(cplx z, unsigned n)
{
    cplx result{1.0, 0.0};
    while (n) {
        if (n & 1u) result *= z;
        z *= z;
        n >>= 1u;
    }
    return result;
}

/// (a^N - b^N) / (a - b), the sum b^{N-1} + a b^{N-2} + ... + a^{N-1}.
/// Written as b^{N-1} N q(r) with r = a/b - 1, q(r) = expm1(N log1p r) / (N r)
/// so that nearby a and b do not cancel.
inline cplx geometric_sum(cplx a, cplx b, unsigned N)
{
    if (N == 0) return 0.0;
    if (N == 1) return 1.0;
    if (b == 0.0) return int_pow(a, N - 1);
    const cplx r = a / b - 1.0;
    const double n = static_cast<double>(N);
    const cplx lead = int_pow(b, N - 1);
    if (std::abs(r) > 0.5) return (int_pow(a, N) - int_pow(b, N)) / (a - b);
    if (std::abs(r) < 1e-8) return lead * n * (1.0 + 0.5 * (n - 1.0) * r);
    return lead * expm1(n * log1p(r)) / r;
}

/// (e^{a T} - e^{b T}) / (a - b) = e^{b T} T expm1(d) / d with d = (a - b) T.
inline cplx exp_difference_quotient(cplx a, cplx b, double T)
{
    const cplx d = (a - b) * T;
    const cplx lead = std::exp(b * T) * T;
    if (std::abs(d) < 1e-8) return lead * (1.0 + 0.5 * d);
    return lead * expm1(d) / d;
}

/// a - b, or exactly zero when the difference is below the rounding noise of
/// its terms. `scale` bounds the magnitudes that were cancelled in forming a and b.
inline cplx cancelling_difference(cplx a, cplx b, double scale = 0.0)
{
    const cplx d = a - b;
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(a) + std::abs(b) + scale);
    return std::abs(d) <= noise ? cplx{} : d;
}

} // namespace numerics
} // namespace levyhedge
