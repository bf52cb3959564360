#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

#include "levyhedge/errors.hpp"
#include "levyhedge/numerics/complex_math.hpp"

namespace levyhedge::numerics {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

struct QuadOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_evals = 200000;
};

template <class V>
struct AdaptiveResult {
    V value{};
    double error = 0.0;
    double l1 = 0.0;  // integral of |f|, used for roundoff-aware stopping
    std::size_t evals = 0;
    bool converged = true;
};

/// One piece of an integration domain. map == 0: plain variable t.
/// map == 1: tail variable t in (0, 1] standing for u = origin + dir * span / t.
struct Segment {
    double lo;
    double hi;
    int map = 0;
};

namespace detail {

// Gauss-Kronrod 7/15 abscissae and weights.
inline constexpr std::array<double, 8> gk_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk_w = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> g_w = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Panel {
    double lo, hi;
    int map;
    V value;
    double error;
    double l1;
};

template <class V>
inline double magnitude(const V& v)
{
    return std::abs(v);
}

template <class V, class Eval>
Panel<V> gk15(Eval& eval, double lo, double hi, int map)
{
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    std::array<V, 15> f;
    f[7] = eval(map, mid);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * gk_x[j];
        f[j] = eval(map, mid - dx);
        f[14 - j] = eval(map, mid + dx);
    }
    V kron = gk_w[7] * f[7];
    V gauss = g_w[3] * f[7];
    double abs_sum = gk_w[7] * magnitude(f[7]);
    for (int j = 0; j < 7; ++j) {
        const V pair = f[j] + f[14 - j];
        kron += gk_w[j] * pair;
        abs_sum += gk_w[j] * (magnitude(f[j]) + magnitude(f[14 - j]));
        if (j % 2 == 1) gauss += g_w[j / 2] * pair;
    }
    const V mean = 0.5 * kron;
    double asc = gk_w[7] * magnitude(f[7] - mean);
    for (int j = 0; j < 7; ++j)
        asc += gk_w[j] * (magnitude(f[j] - mean) + magnitude(f[14 - j] - mean));
    const double h = std::abs(half);
    const V value = kron * half;
    double err = magnitude(V((kron - gauss) * half));
    const double resasc = asc * h;
    if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double l1 = abs_sum * h;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    if (l1 > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(err, 50.0 * eps * l1);
    return {lo, hi, map, value, err, l1};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) over a list of segments.
/// eval(map, t) returns the integrand in the segment's variable, jacobian included.
template <class V, class Eval>
AdaptiveResult<V> integrate_segments(Eval&& eval, std::span<const Segment> segments, const QuadOptions& opts)
{
    using Panel = detail::Panel<V>;
    auto worse = [](const Panel& a, const Panel& b) { return a.error < b.error; };
    std::vector<Panel> heap;
    std::vector<Panel> frozen;
    AdaptiveResult<V> out;
    for (const Segment& s : segments) {
        if (!(s.hi > s.lo)) continue;
        heap.push_back(detail::gk15<V>(eval, s.lo, s.hi, s.map));
        out.evals += 15;
    }
    std::make_heap(heap.begin(), heap.end(), worse);
    auto totals = [&]() {
        V value{};
        double err = 0.0, l1 = 0.0;
        for (const Panel& p : heap) { value += p.value; err += p.error; l1 += p.l1; }
        for (const Panel& p : frozen) { value += p.value; err += p.error; l1 += p.l1; }
        out.value = value;
        out.error = err;
        out.l1 = l1;
    };
    totals();
    // below 100 eps * l1 the estimate is rounding noise and cannot improve
    constexpr double floor_factor = 100.0 * std::numeric_limits<double>::epsilon();
    auto target = [&]() {
        return std::max({opts.abs_tol, opts.rel_tol * detail::magnitude(out.value), floor_factor * out.l1});
    };
    std::size_t since_resum = 0;
    while (!heap.empty()) {
        if (out.error <= target()) break;
        if (out.evals + 30 > opts.max_evals) {
            out.converged = false;
            break;
        }
        std::pop_heap(heap.begin(), heap.end(), worse);
        Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const double scale = std::max({std::abs(worst.lo), std::abs(worst.hi), 1e-300});
        if (worst.hi - worst.lo < 1e-13 * scale || mid <= worst.lo || mid >= worst.hi) {
            frozen.push_back(worst);
            if (heap.empty()) break;
            continue;
        }
        Panel left = detail::gk15<V>(eval, worst.lo, mid, worst.map);
        Panel right = detail::gk15<V>(eval, mid, worst.hi, worst.map);
        out.evals += 30;
        out.value += left.value + right.value - worst.value;
        out.error += left.error + right.error - worst.error;
        out.l1 += left.l1 + right.l1 - worst.l1;
        heap.push_back(left);
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(right);
        std::push_heap(heap.begin(), heap.end(), worse);
        if (++since_resum == 64) {
            totals();
            since_resum = 0;
        }
    }
    totals();
    if (!frozen.empty() && out.error > target()) out.converged = false;
    return out;
}

/// Layout of a half-line [origin, origin + dir * inf): geometric panels of
/// the given scale up to `span`, refined around feature distances, then a
/// mapped tail.
struct HalfLineLayout {
    double scale = 1.0;
    double span = 64.0;
    std::vector<double> features;  // distances from the origin where the integrand has structure
};

namespace detail {

inline std::vector<double> geometric_breaks(double length, double scale, std::span<const double> features)
{
    std::vector<double> b{0.0};
    for (double t = 0.5 * scale; t < length; t *= 2.0) b.push_back(t);
    for (double d : features) {
        for (double off : {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0}) {
            const double t = d + off * scale;
            if (t > 0.0 && t < length) b.push_back(t);
        }
        for (double off = 4.0; d + off * scale < length; off *= 2.0) b.push_back(d + off * scale);
    }
    b.push_back(length);
    std::sort(b.begin(), b.end());
    std::vector<double> out;
    for (double t : b)
        if (out.empty() || t - out.back() > 1e-9 * std::max(1.0, t)) out.push_back(t);
    if (out.back() < length) out.push_back(length);
    return out;
}

} // namespace detail

/// Integral of f over [a, b] with optional interior breakpoints.
template <class V, class F>
AdaptiveResult<V> integrate(F&& f, double a, double b, const QuadOptions& opts,
                            std::span<const double> breakpoints = {})
{
    std::vector<double> pts{a, b};
    for (double p : breakpoints)
        if (p > a && p < b) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    std::vector<Segment> segs;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
        if (pts[k + 1] > pts[k]) segs.push_back({pts[k], pts[k + 1], 0});
    auto eval = [&](int, double t) -> V { return f(t); };
    return integrate_segments<V>(eval, segs, opts);
}

/// Integral over t in [0, inf) of f(origin + dir * t).
template <class V, class F>
AdaptiveResult<V> integrate_half_line(F&& f, double origin, double dir, const QuadOptions& opts,
                                      const HalfLineLayout& layout = {})
{
    double reach = layout.span * layout.scale;
    for (double d : layout.features) reach = std::max(reach, d + layout.span * layout.scale);
    const auto breaks = detail::geometric_breaks(reach, layout.scale, layout.features);
    std::vector<Segment> segs;
    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) segs.push_back({breaks[k], breaks[k + 1], 0});
    segs.push_back({0.0, 1.0, 1});
    auto eval = [&](int map, double t) -> V {
        if (map == 0) return f(origin + dir * t);
        const double u = reach / t;
        const V v = f(origin + dir * u) * (u / t);
        if constexpr (std::is_same_v<V, double>) {
            return std::isfinite(v) ? v : 0.0;
        } else {
            return (std::isfinite(v.real()) && std::isfinite(v.imag())) ? v : V{};
        }
    };
    return integrate_segments<V>(eval, segs, opts);
}

// ---------------------------------------------------------------------------
// Vertical contours
// ---------------------------------------------------------------------------

enum class ContourMode { absolutely_convergent, principal_value };

/// Vertical line Re z = abscissa, integrated over Im z in [-truncation, truncation]
/// (truncation may be infinite in absolutely convergent mode).
struct ContourSpec {
    double abscissa = 0.0;
    double truncation = infinity;
    std::size_t node_budget = 400000;
    ContourMode mode = ContourMode::absolutely_convergent;
    double rel_tolerance = 1e-11;
    double abs_tolerance = 1e-15;

    void validate() const
    {
        if (!std::isfinite(abscissa)) throw DomainError("ContourSpec: abscissa must be finite");
        if (!(truncation > 0.0)) throw DomainError("ContourSpec: truncation must be positive");
        if (mode == ContourMode::principal_value && !std::isfinite(truncation))
            throw DomainError("ContourSpec: principal-value mode needs a finite truncation");
        if (node_budget < 32) throw DomainError("ContourSpec: node budget too small");
        if (!(rel_tolerance > 0.0) || !(abs_tolerance >= 0.0))
            throw DomainError("ContourSpec: tolerances must be positive");
    }
    QuadOptions options() const { return {rel_tolerance, abs_tolerance, node_budget}; }
};

struct QuadratureResult {
    cplx value{};
    double error_estimate = 0.0;
    std::size_t nodes_used = 0;
    bool converged = true;
    double l1_norm = 0.0;
};

/// none: general integrand. conjugate: i f(R + i v) is conjugate-symmetric in v,
/// so the integral is real and only v >= 0 is sampled.
enum class LineSymmetry { none, conjugate };

/// Smallest doubling height c (from `start`) beyond which |f(R + i v)| max(1, v)
/// stays below ratio * peak, capped at `cap`.
template <class F>
double choose_truncation(F&& f, double abscissa, double ratio = 1e-13, double cap = 1e5, double start = 1.0)
{
    double peak = std::abs(f(cplx{abscissa, 0.0}));
    std::vector<std::pair<double, double>> samples;
    for (double v = start; v <= 2.0 * cap; v *= 2.0) {
        const double e = std::max(std::abs(f(cplx{abscissa, v})), std::abs(f(cplx{abscissa, 1.5 * v}))) *
                         std::max(1.0, 1.5 * v);
        peak = std::max(peak, e);
        samples.push_back({v, e});
    }
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        if (samples[k].second < ratio * peak && samples[k + 1].second < ratio * peak)
            return std::min(samples[k].first, cap);
    }
    return cap;
}

/// Plain line integral of f(z) dz along the contour (no 1/(2 pi i) factor).
/// An infinite truncation is replaced by the height where |f| max(1, |v|)
/// falls below 1e-12 of its peak (at most 1e5): mapping an oscillating
/// algebraic tail onto a finite interval cannot be resolved. The integral
/// over the upper half of that height is added to the error estimate as a
/// measure of the discarded tail.
template <class F>
QuadratureResult contour_integrate(F&& f, const ContourSpec& spec, LineSymmetry symmetry = LineSymmetry::none)
{
    spec.validate();
    const double R = spec.abscissa;
    const bool infinite = !std::isfinite(spec.truncation);
    const double c = infinite ? choose_truncation(f, R, 1e-12, 1e5) : spec.truncation;
    QuadOptions opts = spec.options();
    if (infinite) opts.max_evals /= 2;

    auto run = [&](auto&& g, auto zero) {
        using V = decltype(zero);
        if (!infinite) return integrate<V>(g, 0.0, c, opts, detail::geometric_breaks(c, 1.0, {}));
        auto lower = integrate<V>(g, 0.0, 0.5 * c, opts, detail::geometric_breaks(0.5 * c, 1.0, {}));
        const auto upper = integrate<V>(g, 0.5 * c, c, opts);
        lower.value += upper.value;
        lower.error += upper.error + std::abs(upper.value);
        lower.l1 += upper.l1;
        lower.evals += upper.evals;
        const double tol = std::max(opts.abs_tol, opts.rel_tol * std::abs(lower.value));
        lower.converged = lower.converged && upper.converged && lower.error <= std::max(tol, 100.0 * std::numeric_limits<double>::epsilon() * lower.l1);
        return lower;
    };
    if (symmetry == LineSymmetry::conjugate) {
        auto g = [&](double v) -> double { return (I * f(cplx{R, v})).real(); };
        const auto r = run(g, 0.0);
        return {2.0 * r.value, 2.0 * r.error, r.evals, r.converged, 2.0 * r.l1};
    }
    auto g = [&](double v) -> cplx { return I * (f(cplx{R, v}) + f(cplx{R, -v})); };
    const auto r = run(g, cplx{});
    return {r.value, r.error, 2 * r.evals, r.converged, r.l1};
}

// ---------------------------------------------------------------------------
// Double contours
// ---------------------------------------------------------------------------

/// exchange: K(y, z) == K(z, y). conjugate: the double integral is real, with
/// the integrand conjugate-symmetric under (Im y, Im z) -> (-Im y, -Im z).
struct DoubleSymmetry {
    bool exchange = false;
    bool conjugate = false;
};

/// Integral of K(y, z) dy dz over the product of two vertical contours.
///
/// Coordinates are rotated: s = Im y + Im z is the outer variable and
/// u = Im y the inner one, so integrands whose mass runs along the
/// anti-diagonal (Im y = -Im z) are resolved by the outer rule alone.
/// Finite truncations integrate exactly over the rectangle
/// [-cY, cY] x [-cZ, cZ]. contourY.node_budget bounds each inner integral,
/// contourZ.node_budget bounds the number of outer nodes.
template <class K>
QuadratureResult double_contour_integrate(K&& kernel, const ContourSpec& contourY, const ContourSpec& contourZ,
                                          DoubleSymmetry symmetry = {})
{
    contourY.validate();
    contourZ.validate();
    const double Ry = contourY.abscissa, Rz = contourZ.abscissa;
    const double cy = contourY.truncation, cz = contourZ.truncation;
    const bool finite = std::isfinite(cy) && std::isfinite(cz);
    if (std::isfinite(cy) != std::isfinite(cz))
        throw DomainError("double_contour_integrate: truncations must be both finite or both infinite");
    const bool exchange = symmetry.exchange && Ry == Rz && cy == cz;

    QuadOptions inner_opts = contourY.options();
    inner_opts.rel_tol *= 0.1;
    std::size_t kernel_evals = 0;
    double worst_inner = 0.0;
    bool inner_ok = true;

    // F(u) = K(Ry + i u, Rz + i (s - u)) * (i * i)
    auto inner = [&](double s) -> cplx {
        auto F = [&](double u) -> cplx { return -kernel(cplx{Ry, u}, cplx{Rz, s - u}); };
        cplx value{};
        double err = 0.0, l1 = 0.0;
        auto absorb = [&](const AdaptiveResult<cplx>& r, double factor) {
            value += factor * r.value;
            err += std::abs(factor) * r.error;
            l1 += std::abs(factor) * r.l1;
            kernel_evals += r.evals;
            inner_ok = inner_ok && r.converged;
        };
        const double mid = 0.5 * s;
        if (finite) {
            const double lo = std::max(-cy, s - cz), hi = std::min(cy, s + cz);
            if (!(hi > lo)) return 0.0;
            std::vector<double> brk;
            for (double p : {0.0, s, mid})
                for (double off : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) brk.push_back(p + off);
            if (exchange) {
                absorb(integrate<cplx>(F, mid, hi, inner_opts, brk), 2.0);
            } else {
                absorb(integrate<cplx>(F, lo, hi, inner_opts, brk), 1.0);
            }
        } else {
            const double d = std::abs(mid);
            HalfLineLayout layout;
            layout.features = {d};
            if (exchange) {
                absorb(integrate_half_line<cplx>(F, mid, 1.0, inner_opts, layout), 2.0);
            } else {
                absorb(integrate_half_line<cplx>(F, mid, 1.0, inner_opts, layout), 1.0);
                absorb(integrate_half_line<cplx>(F, mid, -1.0, inner_opts, layout), 1.0);
            }
        }
        if (l1 > 0.0) worst_inner = std::max(worst_inner, err / l1);
        return value;
    };

    QuadOptions outer_opts{contourZ.rel_tolerance, contourZ.abs_tolerance, contourZ.node_budget};
    QuadratureResult out;
    if (symmetry.conjugate) {
        auto g = [&](double s) -> double { return inner(s).real(); };
        AdaptiveResult<double> r;
        if (finite) {
            const auto breaks = detail::geometric_breaks(cy + cz, 1.0, {});
            r = integrate<double>(g, 0.0, cy + cz, outer_opts, breaks);
        } else {
            r = integrate_half_line<double>(g, 0.0, 1.0, outer_opts);
        }
        out.value = 2.0 * r.value;
        out.error_estimate = 2.0 * (r.error + worst_inner * r.l1);
        out.l1_norm = 2.0 * r.l1;
        out.converged = r.converged;
    } else {
        auto g = [&](double s) -> cplx { return inner(s) + inner(-s); };
        AdaptiveResult<cplx> r;
        if (finite) {
            const auto breaks = detail::geometric_breaks(cy + cz, 1.0, {});
            r = integrate<cplx>(g, 0.0, cy + cz, outer_opts, breaks);
        } else {
            r = integrate_half_line<cplx>(g, 0.0, 1.0, outer_opts);
        }
        out.value = r.value;
        out.error_estimate = r.error + worst_inner * r.l1;
        out.l1_norm = r.l1;
        out.converged = r.converged;
    }
    out.converged = out.converged && inner_ok;
    out.nodes_used = kernel_evals;
    return out;
}

} // namespace levyhedge::numerics
