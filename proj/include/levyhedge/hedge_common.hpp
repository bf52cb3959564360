#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "levyhedge/errors.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/numerics.hpp"
#include "levyhedge/payoffs.hpp"

namespace levyhedge::hedge {

using payoffs::TransformMeasure;

/// Quadrature controls shared by the discrete and continuous engines.
struct QuadratureSettings {
    double rel_tol = 1e-12;
    double abs_tol = 1e-15;
    std::size_t node_budget = 400000;
    // vertical lines are cut where |integrand| * max(1, v) < ratio * peak
    double truncation_ratio = 1e-15;
    double truncation_cap = 2e5;
    // error-variance integrals
    double j0_rel_tol = 1e-8;
    std::size_t j0_inner_budget = 40000;
    std::size_t j0_outer_budget = 20000;
    // > 0: cut principal-value lines of J0 at this square half-width (jointly symmetric)
    double j0_pv_truncation = 0.0;
};

struct Evaluation {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

/// Error variance of a hedge: the clamped value and the raw double integral.
struct ErrorVariance {
    double value = 0.0;
    double raw = 0.0;
    double error_estimate = 0.0;
    std::size_t nodes_used = 0;
    bool converged = true;
};

namespace detail {

/// int S^{z + shift} weight(z) Pi(dz), lines truncated per the settings.
/// `cuts` caches one truncation per line (filled when empty).
template <class W>
Evaluation integrate_against(const TransformMeasure& m, W&& weight, double S, double shift,
                             const QuadratureSettings& qs, std::vector<double>& cuts)
{
    Evaluation out;
    const double ls = std::log(S);
    cplx total{};
    for (const auto& p : m.points) total += p.weight * std::exp((p.location + shift) * ls) * weight(p.location);
    if (cuts.size() != m.lines.size()) {
        cuts.clear();
        for (const auto& l : m.lines) {
            auto env = [&](cplx z) { return weight(z) * l.density(z); };
            cuts.push_back(numerics::choose_truncation(env, l.abscissa, qs.truncation_ratio, qs.truncation_cap));
        }
    }
    for (std::size_t k = 0; k < m.lines.size(); ++k) {
        const auto& l = m.lines[k];
        numerics::ContourSpec spec;
        spec.abscissa = l.abscissa;
        spec.truncation = cuts[k];
        spec.mode = l.principal_value ? numerics::ContourMode::principal_value
                                      : numerics::ContourMode::absolutely_convergent;
        spec.node_budget = qs.node_budget;
        spec.rel_tolerance = qs.rel_tol;
        spec.abs_tolerance = qs.abs_tol;
        auto f = [&](cplx z) { return std::exp((z + shift) * ls) * weight(z) * l.density(z); };
        const auto r = numerics::contour_integrate(f, spec, numerics::LineSymmetry::conjugate);
        total += r.value;
        out.error_estimate += r.error_estimate;
        out.converged = out.converged && r.converged;
    }
    out.value = total.real();
    return out;
}

/// int int K(y, z) Pi(dy) Pi(dz) for a kernel symmetric in (y, z).
template <class Kern>
ErrorVariance integrate_pairs(const TransformMeasure& m, Kern&& kernel, const QuadratureSettings& qs)
{
    ErrorVariance out;
    cplx total{};
    double size = 0.0;  // L1 size of the integral, scales the negativity tolerance
    auto spec_for = [&](const payoffs::LineComponent& l, std::size_t budget) {
        numerics::ContourSpec s;
        s.abscissa = l.abscissa;
        s.node_budget = budget;
        s.rel_tolerance = qs.j0_rel_tol;
        s.abs_tolerance = qs.abs_tol;
        if (l.principal_value && qs.j0_pv_truncation > 0.0) {
            s.truncation = qs.j0_pv_truncation;
            s.mode = numerics::ContourMode::principal_value;
        }
        return s;
    };
    const auto& L = m.lines;
    for (std::size_t i = 0; i < L.size(); ++i) {
        for (std::size_t j = i; j < L.size(); ++j) {
            const auto sy = spec_for(L[i], qs.j0_inner_budget);
            auto sz = spec_for(L[j], qs.j0_outer_budget);
            const bool pv_i = std::isfinite(sy.truncation), pv_j = std::isfinite(sz.truncation);
            auto sy2 = sy;
            if (pv_i != pv_j) {  // mixed pair: cut both on the same square
                const double c = pv_i ? sy.truncation : sz.truncation;
                sy2.truncation = c;
                sz.truncation = c;
                sy2.mode = sz.mode = numerics::ContourMode::principal_value;
            }
            const auto& di = L[i].density;
            const auto& dj = L[j].density;
            auto K = [&](cplx y, cplx z) { return kernel(y, z) * di(y) * dj(z); };
            const auto r = numerics::double_contour_integrate(K, sy2, sz, {i == j, true});
            const double factor = i == j ? 1.0 : 2.0;
            total += factor * r.value;
            out.error_estimate += factor * r.error_estimate;
            out.nodes_used += r.nodes_used;
            out.converged = out.converged && r.converged;
            size += factor * r.l1_norm;
        }
    }
    for (const auto& p : m.points) {
        for (const auto& l : L) {
            const numerics::ContourSpec s = spec_for(l, qs.node_budget);
            auto f = [&](cplx z) { return p.weight * kernel(p.location, z) * l.density(z); };
            const bool real_point = p.location.imag() == 0.0 && p.weight.imag() == 0.0;
            const auto r = numerics::contour_integrate(
                f, s, real_point ? numerics::LineSymmetry::conjugate : numerics::LineSymmetry::none);
            total += 2.0 * r.value;
            out.error_estimate += 2.0 * r.error_estimate;
            out.nodes_used += r.nodes_used;
            out.converged = out.converged && r.converged;
            size += 2.0 * r.l1_norm;
        }
        for (const auto& q : m.points) total += p.weight * q.weight * kernel(p.location, q.location);
    }
    out.raw = total.real();
    if (out.raw < -1e-8 * (1.0 + size))
        throw QuadratureFailure("error variance is materially negative (" + std::to_string(out.raw) +
                                "): quadrature failure");
    out.value = std::max(out.raw, 0.0);
    return out;
}

} // namespace detail
} // namespace levyhedge::hedge
