#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levyhedge/errors.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/numerics.hpp"

namespace levyhedge::payoffs {

using Density = std::function<cplx(cplx)>;

/// Measure density(z) dz on the line Re z = abscissa. The density carries the
/// 1/(2 pi i) factor. |density(z)| grows like exp(-log_scale * Re z) (log_scale
/// is log K for strike-based claims), which steers contour deformation.
struct LineComponent {
    double abscissa = 0.0;
    Density density;
    bool principal_value = false;
    double log_scale = 0.0;
    Density reduced;  // e^{z log_scale} density(z) when known; keeps s^z density(z) finite far off the line
};

struct PointMass {
    cplx location;
    cplx weight;
};

/// Complex measure Pi with f(s) = int s^z Pi(dz).
struct TransformMeasure {
    std::vector<LineComponent> lines;
    std::vector<PointMass> points;
    std::function<double(double)> payoff;  // closed form f(s), when known
    std::string label;

    bool empty() const { return lines.empty() && points.empty(); }

    double strip_lo() const
    {
        double lo = std::numeric_limits<double>::infinity();
        for (const auto& l : lines) lo = std::min(lo, l.abscissa);
        for (const auto& p : points) lo = std::min(lo, p.location.real());
        return lo;
    }
    double strip_hi() const
    {
        double hi = -std::numeric_limits<double>::infinity();
        for (const auto& l : lines) hi = std::max(hi, l.abscissa);
        for (const auto& p : points) hi = std::max(hi, p.location.real());
        return hi;
    }
};

inline TransformMeasure operator*(double a, const TransformMeasure& m)
{
    TransformMeasure out;
    for (const auto& l : m.lines) {
        LineComponent c = l;
        c.density = [d = l.density, a](cplx z) { return a * d(z); };
        if (l.reduced) c.reduced = [r = l.reduced, a](cplx z) { return a * r(z); };
        out.lines.push_back(std::move(c));
    }
    for (const auto& p : m.points) out.points.push_back({p.location, a * p.weight});
    if (m.payoff) out.payoff = [f = m.payoff, a](double s) { return a * f(s); };
    out.label = m.label.empty() ? std::string{} : std::to_string(a) + "*" + m.label;
    return out;
}

inline TransformMeasure operator+(const TransformMeasure& a, const TransformMeasure& b)
{
    TransformMeasure out = a;
    out.lines.insert(out.lines.end(), b.lines.begin(), b.lines.end());
    out.points.insert(out.points.end(), b.points.begin(), b.points.end());
    if (a.payoff && b.payoff) {
        out.payoff = [f = a.payoff, g = b.payoff](double s) { return f(s) + g(s); };
    } else if (a.empty() && b.payoff) {
        out.payoff = b.payoff;
    } else if (b.empty() && a.payoff) {
        out.payoff = a.payoff;
    } else {
        out.payoff = nullptr;
    }
    out.label = a.label + "+" + b.label;
    return out;
}

inline TransformMeasure operator-(const TransformMeasure& a, const TransformMeasure& b)
{
    return a + (-1.0) * b;
}

namespace detail {

inline const cplx two_pi_i{0.0, 2.0 * pi};

inline void require_strike(double K)
{
    if (!(K > 0.0) || !std::isfinite(K)) throw DomainError("strike must be positive and finite");
}

inline void require_abscissa(bool ok, const std::string& what)
{
    if (!ok) throw InvalidAbscissa(what);
}

// K^z times the call density K^{1-z} / (2 pi i z (z - 1))
inline Density call_reduced(double K)
{
    return [K](cplx z) { return K / (two_pi_i * z * (z - 1.0)); };
}

// density(z) = K^{-z} reduced(z)
inline LineComponent scaled_line(double R, Density reduced, bool pv, double K)
{
    const double lk = std::log(K);
    Density d = [reduced, lk](cplx z) { return std::exp(-z * lk) * reduced(z); };
    return {R, std::move(d), pv, lk, std::move(reduced)};
}

} // namespace detail

/// (s - K)^+ with the line to the right of 1.
inline TransformMeasure call(double K, double R = 1.5)
{
    detail::require_strike(K);
    detail::require_abscissa(R > 1.0, "call: abscissa must exceed 1");
    TransformMeasure m;
    m.lines.push_back(detail::scaled_line(R, detail::call_reduced(K), false, K));
    m.payoff = [K](double s) { return std::max(s - K, 0.0); };
    m.label = "call";
    return m;
}

/// (K - s)^+: the call density on a line left of 0.
inline TransformMeasure put(double K, double R = -0.5)
{
    detail::require_strike(K);
    detail::require_abscissa(R < 0.0, "put: abscissa must be negative");
    TransformMeasure m;
    m.lines.push_back(detail::scaled_line(R, detail::call_reduced(K), false, K));
    m.payoff = [K](double s) { return std::max(K - s, 0.0); };
    m.label = "put";
    return m;
}

/// (s - K)^+ as [(s - K)^+ - s] on a line in (0, 1) plus the stock as a unit
/// mass at 1, so only moments up to order 2 are needed.
inline TransformMeasure call_low_moment(double K, double R = 0.5)
{
    detail::require_strike(K);
    detail::require_abscissa(R > 0.0 && R < 1.0, "call_low_moment: abscissa must lie in (0, 1)");
    TransformMeasure m;
    m.lines.push_back(detail::scaled_line(R, detail::call_reduced(K), false, K));
    m.points.push_back({1.0, 1.0});
    m.payoff = [K](double s) { return std::max(s - K, 0.0); };
    m.label = "call_low_moment";
    return m;
}

/// ((s - K)^+)^n for integer n >= 2.
inline TransformMeasure power_call(double K, int n, std::optional<double> abscissa = {})
{
    detail::require_strike(K);
    if (n < 2) throw DomainError("power_call: power must be an integer >= 2");
    const double R = abscissa.value_or(n + 0.5);
    detail::require_abscissa(R > n, "power_call: abscissa must exceed the power");
    double factorial = 1.0;
    for (int k = 2; k <= n; ++k) factorial *= k;
    const double scale = factorial * std::pow(K, n);
    TransformMeasure m;
    m.lines.push_back(detail::scaled_line(
        R,
        [=](cplx z) {
            cplx den = detail::two_pi_i;
            for (int k = 0; k <= n; ++k) den *= (z - static_cast<double>(k));
            return scale / den;
        },
        false, K));
    m.payoff = [K, n](double s) { return std::pow(std::max(s - K, 0.0), n); };
    m.label = "power_call";
    return m;
}

/// ((s - K)^+)^a for real a > 1, density K^{a - z} B(a + 1, z - a) / (2 pi i).
inline TransformMeasure power_call_fractional(double K, double a, std::optional<double> abscissa = {})
{
    detail::require_strike(K);
    if (!(a > 1.0) || !std::isfinite(a)) throw DomainError("power_call_fractional: power must exceed 1");
    const double R = abscissa.value_or(a + 0.5);
    detail::require_abscissa(R > a, "power_call_fractional: abscissa must exceed the power");
    const double scale = std::pow(K, a);
    TransformMeasure m;
    m.lines.push_back(detail::scaled_line(
        R, [=](cplx z) { return scale * numerics::beta(a + 1.0, z - a) / detail::two_pi_i; }, false, K));
    m.payoff = [K, a](double s) { return std::pow(std::max(s - K, 0.0), a); };
    m.label = "power_call_fractional";
    return m;
}

/// (s - K)^+ s, density K^{2 - z} / (2 pi i (z - 1)(z - 2)).
inline TransformMeasure self_quanto_call(double K, double R = 2.5)
{
    detail::require_strike(K);
    detail::require_abscissa(R > 2.0, "self_quanto_call: abscissa must exceed 2");
    const double K2 = K * K;
    TransformMeasure m;
    m.lines.push_back(
        detail::scaled_line(R, [K2](cplx z) { return K2 / (detail::two_pi_i * (z - 1.0) * (z - 2.0)); }, false, K));
    m.payoff = [K](double s) { return std::max(s - K, 0.0) * s; };
    m.label = "self_quanto_call";
    return m;
}

/// 1{s > K} + 1/2 1{s = K}, density K^{-z} / (2 pi i z), principal value.
inline TransformMeasure digital(double K, double R = 0.5)
{
    detail::require_strike(K);
    detail::require_abscissa(R > 0.0, "digital: abscissa must be positive");
    TransformMeasure m;
    m.lines.push_back(detail::scaled_line(R, [](cplx z) { return 1.0 / (detail::two_pi_i * z); }, true, K));
    m.payoff = [K](double s) { return s > K ? 1.0 : (s == K ? 0.5 : 0.0); };
    m.label = "digital";
    return m;
}

/// log s as the difference of 1/(2 pi i z^2) on a line right of 0 and on a line left of 0.
inline TransformMeasure log_contract(double abscissa_neg = -0.5, double abscissa_pos = 0.5)
{
    detail::require_abscissa(abscissa_neg < 0.0, "log_contract: negative abscissa must be < 0");
    detail::require_abscissa(abscissa_pos > 0.0, "log_contract: positive abscissa must be > 0");
    TransformMeasure m;
    m.lines.push_back({abscissa_pos, [](cplx z) { return 1.0 / (detail::two_pi_i * z * z); }, false, 0.0, nullptr});
    m.lines.push_back({abscissa_neg, [](cplx z) { return -1.0 / (detail::two_pi_i * z * z); }, false, 0.0, nullptr});
    m.payoff = [](double s) { return std::log(s); };
    m.label = "log_contract";
    return m;
}

/// The stock itself: unit mass at z = 1.
inline TransformMeasure stock()
{
    TransformMeasure m;
    m.points.push_back({1.0, 1.0});
    m.payoff = [](double s) { return s; };
    m.label = "stock";
    return m;
}

/// Structural checks: conjugate symmetry of every line (i density(R + i v)
/// conjugate-symmetric in v) and conjugate pairing of complex point masses.
inline void validate(const TransformMeasure& m)
{
    for (const auto& l : m.lines) {
        if (!l.density) throw DomainError("TransformMeasure: line without density");
        if (!std::isfinite(l.abscissa)) throw DomainError("TransformMeasure: non-finite abscissa");
        for (double v : {0.37, 1.9, 7.3}) {
            const cplx up = I * l.density(cplx{l.abscissa, v});
            const cplx down = I * l.density(cplx{l.abscissa, -v});
            if (std::abs(up - std::conj(down)) > 1e-12 * (std::abs(up) + 1e-300))
                throw DomainError("TransformMeasure: line density is not conjugate-symmetric");
        }
    }
    for (const auto& p : m.points) {
        if (p.location.imag() == 0.0) {
            if (p.weight.imag() != 0.0)
                throw DomainError("TransformMeasure: real point mass with complex weight");
            continue;
        }
        const bool paired = std::any_of(m.points.begin(), m.points.end(), [&](const PointMass& q) {
            return q.location == std::conj(p.location) && q.weight == std::conj(p.weight);
        });
        if (!paired) throw DomainError("TransformMeasure: complex point mass without conjugate partner");
    }
}

/// The hedging formulas need E e^{2 R X_1} for every abscissa R used and the
/// strip to contain [0, 2].
inline bool abscissa_admissible(const TransformMeasure& m, const models::Strip& strip)
{
    if (!(strip.lo < 0.0 && strip.hi > 2.0)) return false;
    if (m.empty()) return true;
    if (!strip.contains(2.0 * m.strip_lo()) || !strip.contains(2.0 * m.strip_hi())) return false;
    return std::all_of(m.points.begin(), m.points.end(),
                       [&](const PointMass& p) { return strip.contains(2.0 * p.location.real()); });
}

struct Inversion {
    double value = 0.0;
    double imag_residue = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

namespace detail {

// 1/(2 pi i) is inside the density; integrates s^z density(z) dz along the whole line.
inline Inversion invert_line(const LineComponent& line, double s)
{
    const double R = line.abscissa;
    const double ls = std::log(s);
    const double x = ls - line.log_scale;
    auto f = [&](cplx z) {
        if (line.reduced) return std::exp(z * x) * line.reduced(z);
        return std::exp(z * ls) * line.density(z);
    };
    constexpr double c0 = 2.0;
    const numerics::QuadOptions opts{1e-12, 1e-15, 400000};

    // vertical piece |Im z| <= c0, paired so the PV limit is built in
    auto near = [&](double v) { return I * (f(cplx{R, v}) + f(cplx{R, -v})); };
    const auto mid = numerics::integrate<cplx>(near, 0.0, c0, opts, std::vector<double>{0.5, 1.0});

    numerics::AdaptiveResult<cplx> tail;
    if (x == 0.0) {
        tail = numerics::integrate_half_line<cplx>(near, c0, 1.0, opts);
    } else {
        // Cauchy: move both tails onto horizontal rays Im z = +-c0 heading
        // towards the side where |s^z density(z)| ~ e^{x Re z} decays.
        const double dir = x > 0.0 ? -1.0 : 1.0;
        auto ray = [&](double r) {
            const double re = R + dir * r;
            return dir * (f(cplx{re, c0}) - f(cplx{re, -c0}));
        };
        numerics::HalfLineLayout layout;
        layout.span = 64.0 * std::max(1.0, 1.0 / std::abs(x));
        tail = numerics::integrate_half_line<cplx>(ray, 0.0, 1.0, opts, layout);
    }
    const cplx total = mid.value + tail.value;
    return {total.real(), total.imag(), mid.error + tail.error, mid.converged && tail.converged};
}

} // namespace detail

/// Bromwich reconstruction of f(s) from the measure, with diagnostics.
inline Inversion invert(const TransformMeasure& m, double s)
{
    if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("evaluate_payoff: s must be positive and finite");
    Inversion out;
    cplx total{};
    for (const auto& p : m.points) total += p.weight * std::exp(p.location * std::log(s));
    for (const auto& l : m.lines) {
        const Inversion part = detail::invert_line(l, s);
        total += cplx{part.value, part.imag_residue};
        out.error_estimate += part.error_estimate;
        out.converged = out.converged && part.converged;
    }
    out.value = total.real();
    out.imag_residue = total.imag();
    return out;
}

/// f(s) = int s^z Pi(dz) (imaginary rounding residue discarded).
inline double evaluate_payoff(const TransformMeasure& m, double s)
{
    return invert(m, s).value;
}

} // namespace levyhedge::payoffs
