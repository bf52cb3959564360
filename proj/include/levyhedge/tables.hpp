#pragma once

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "levyhedge/errors.hpp"
#include "levyhedge/hedge_continuous.hpp"
#include "levyhedge/hedge_discrete.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/numerics.hpp"
#include "levyhedge/payoffs.hpp"

namespace levyhedge::tables {

using payoffs::TransformMeasure;

struct TableOptions {
    double dv = 2.0 * pi / 80.0;  // frequency step; the log-price period is 2 pi / dv
    double dx_target = 0.0025;    // requested log-price spacing (upper bound)
    int max_log2 = 21;            // largest FFT length 2^max_log2
    double window = 10.0;         // |log(S / S_center)| served from the table
    double truncation_ratio = 1e-15;
};

/// F(x) = int e^{(z + shift) x} weight(z) Pi(dz) on a uniform grid in x = log S,
/// read back by 4-point Lagrange interpolation. Point masses are kept exact.
class LogPriceTable {
public:
    LogPriceTable() = default;

    bool covers(double x) const { return !values_.empty() && std::abs(x - center_) <= window_; }

    double operator()(double x) const
    {
        const double t = (x - x0_) / dx_;
        auto j = static_cast<long>(std::floor(t)) - 1;
        j = std::clamp<long>(j, 0, static_cast<long>(values_.size()) - 4);
        const double u = t - static_cast<double>(j);  // nodes at u = 0, 1, 2, 3
        const double* f = values_.data() + j;
        const double l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
        const double l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
        const double l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
        const double l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
        double v = l0 * f[0] + l1 * f[1] + l2 * f[2] + l3 * f[3];
        for (const auto& [exponent, coef] : points_) v += (coef * std::exp(exponent * x)).real();
        return v;
    }

    std::size_t size() const { return values_.size(); }
    double spacing() const { return dx_; }

    template <class W>
    friend LogPriceTable build_table(const TransformMeasure& m, W&& weight, double shift, double center,
                                     const TableOptions& opts);

private:
    double x0_ = 0.0, dx_ = 1.0, center_ = 0.0, window_ = 0.0;
    std::vector<double> values_;
    std::vector<std::pair<cplx, cplx>> points_;  // e^{exponent x} coef
};

namespace detail {

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n)
        : in(fftw_alloc_complex(n)), out(fftw_alloc_complex(n)),
          plan(fftw_plan_dft_1d(static_cast<int>(n), in, out, FFTW_BACKWARD, FFTW_ESTIMATE))
    {
        if (!in || !out || !plan) throw NumericalError("FFTW allocation failed");
    }
    ~FftwBuffer()
    {
        fftw_destroy_plan(plan);
        fftw_free(in);
        fftw_free(out);
    }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;

    fftw_complex* in;
    fftw_complex* out;
    fftw_plan plan;
};

inline std::size_t next_pow2(double x)
{
    std::size_t n = 64;
    while (static_cast<double>(n) < x) n <<= 1;
    return n;
}

} // namespace detail

/// Trapezoid rule on each line, all lines sharing one grid:
///   F(x_j) = e^{(R + shift) x_j} 2 dv Re[sum_k a_k e^{2 pi i j k / M} - a_0 / 2],
///   a_k = i weight(R + i v_k) density(R + i v_k) e^{i v_k x_0}, v_k = k dv.
template <class W>
LogPriceTable build_table(const TransformMeasure& m, W&& weight, double shift, double center,
                          const TableOptions& opts)
{
    if (!(opts.dv > 0.0) || !(opts.dx_target > 0.0) || opts.max_log2 < 6 || opts.max_log2 > 26)
        throw DomainError("build_table: invalid table options");
    const double period = 2.0 * pi / opts.dv;
    if (!(opts.window > 0.0 && opts.window < 0.3 * period))
        throw DomainError("build_table: window must be positive and well inside the period 2 pi / dv");
    const double max_len = std::ldexp(1.0, opts.max_log2);

    double need = period / opts.dx_target;
    for (const auto& l : m.lines) {
        auto env = [&](cplx z) { return weight(z) * l.density(z); };
        const double c = numerics::choose_truncation(env, l.abscissa, opts.truncation_ratio, max_len * opts.dv);
        need = std::max(need, c / opts.dv);
    }
    const std::size_t M = detail::next_pow2(std::min(need, max_len));

    LogPriceTable t;
    t.dx_ = period / static_cast<double>(M);
    t.x0_ = center - 0.5 * period;
    t.center_ = center;
    t.window_ = opts.window;
    t.values_.assign(M, 0.0);
    for (const auto& p : m.points) t.points_.push_back({p.location + shift, p.weight * weight(p.location)});
    if (m.lines.empty()) {
        t.values_.assign(4, 0.0);
        t.x0_ = center - 1.5;
        t.dx_ = 1.0;
        return t;
    }

    detail::FftwBuffer buf(M);
    for (const auto& l : m.lines) {
        const double R = l.abscissa;
        for (std::size_t k = 0; k < M; ++k) {
            const double v = static_cast<double>(k) * opts.dv;
            const cplx z{R, v};
            cplx a = I * weight(z) * l.density(z) * std::polar(1.0, v * t.x0_);
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) a = 0.0;
            buf.in[k][0] = a.real();
            buf.in[k][1] = a.imag();
        }
        const double a0 = buf.in[0][0];
        fftw_execute(buf.plan);
        for (std::size_t j = 0; j < M; ++j) {
            const double x = t.x0_ + static_cast<double>(j) * t.dx_;
            t.values_[j] += std::exp((R + shift) * x) * 2.0 * opts.dv * (buf.out[j][0] - 0.5 * a0);
        }
    }
    return t;
}

/// Standard deviation of one step's log return, used to size the grid.
inline double step_sd(const models::LevyModelSpec& model, double dt)
{
    return std::sqrt(models::log_moments(model).variance * dt);
}

inline TableOptions options_for_step(const models::LevyModelSpec& model, double dt, TableOptions base = {})
{
    base.dx_target = std::min(base.dx_target, step_sd(model, dt) / 32.0);
    return base;
}

/// Discrete-engine pricer that serves H_n and xi_n from FFT tables around S0,
/// falling back to direct quadrature outside the tabulated window.
/// Tables are built lazily; not safe to share between threads.
class TabulatedDiscretePricer {
public:
    TabulatedDiscretePricer(hedge::DiscreteHedgeCoefficients coeffs, TransformMeasure measure, double S0,
                            hedge::QuadratureSettings qs = {}, TableOptions opts = {})
        : direct_(std::move(coeffs), std::move(measure), qs), center_(std::log(S0)),
          opts_(options_for_step(direct_.coefficients().model, direct_.coefficients().dt, opts)),
          price_(direct_.coefficients().N + 1), xi_(direct_.coefficients().N + 1)
    {
    }

    const hedge::DiscreteHedgeCoefficients& coefficients() const { return direct_.coefficients(); }
    const TransformMeasure& measure() const { return direct_.measure(); }
    const hedge::DiscretePricer& direct() const { return direct_; }

    hedge::Evaluation price(int n, double S) const
    {
        const int N = coefficients().N;
        if (n < 0 || n >= N || !(S > 0.0)) return direct_.price(n, S);
        const double x = std::log(S);
        auto& t = price_[n];
        if (t.size() == 0) {
            auto w = [&](cplx z) { return direct_.price_weight(n, z); };
            t = build_table(measure(), w, 0.0, center_, opts_);
        }
        if (!t.covers(x)) return direct_.price(n, S);
        return {t(x), 0.0, true};
    }

    hedge::Evaluation xi(int n, double S_prev) const
    {
        const int N = coefficients().N;
        if (n < 1 || n > N || !(S_prev > 0.0)) return direct_.xi(n, S_prev);
        const double x = std::log(S_prev);
        auto& t = xi_[n];
        if (t.size() == 0) {
            auto w = [&](cplx z) { return direct_.xi_weight(n, z); };
            t = build_table(measure(), w, -1.0, center_, opts_);
        }
        if (!t.covers(x)) return direct_.xi(n, S_prev);
        return {t(x), 0.0, true};
    }

private:
    hedge::DiscretePricer direct_;
    double center_;
    TableOptions opts_;
    mutable std::vector<LogPriceTable> price_;
    mutable std::vector<LogPriceTable> xi_;
};

/// Continuous-engine pricer with one table pair per distinct time.
class TabulatedContinuousPricer {
public:
    TabulatedContinuousPricer(hedge::ContinuousHedgeCoefficients coeffs, TransformMeasure measure, double S0,
                              double dt_hint, hedge::QuadratureSettings qs = {}, TableOptions opts = {})
        : direct_(std::move(coeffs), std::move(measure), qs), center_(std::log(S0)),
          opts_(options_for_step(direct_.coefficients().model, dt_hint, opts))
    {
    }

    const hedge::ContinuousHedgeCoefficients& coefficients() const { return direct_.coefficients(); }
    const TransformMeasure& measure() const { return direct_.measure(); }

    hedge::Evaluation price(double t, double S) const
    {
        const auto& c = coefficients();
        if (!(t >= 0.0 && t < c.T) || !(S > 0.0)) return direct_.price(t, S);
        const double x = std::log(S);
        auto& tab = slot(t).price;
        if (tab.size() == 0) {
            const double tau = c.T - t;
            auto w = [&](cplx z) { return std::exp(c.eta(z) * tau); };
            tab = build_table(measure(), w, 0.0, center_, opts_);
        }
        if (!tab.covers(x)) return direct_.price(t, S);
        return {tab(x), 0.0, true};
    }

    hedge::Evaluation xi(double t, double S) const
    {
        const auto& c = coefficients();
        if (!(t >= 0.0 && t < c.T) || !(S > 0.0)) return direct_.xi(t, S);
        const double x = std::log(S);
        auto& tab = slot(t).xi;
        if (tab.size() == 0) {
            const double tau = c.T - t;
            auto w = [&](cplx z) {
                const auto v = c.values(z);
                return v.gamma * std::exp(v.eta * tau);
            };
            tab = build_table(measure(), w, -1.0, center_, opts_);
        }
        if (!tab.covers(x)) return direct_.xi(t, S);
        return {tab(x), 0.0, true};
    }

private:
    struct Slot {
        LogPriceTable price, xi;
    };
    Slot& slot(double t) const { return slots_[t]; }

    hedge::ContinuousPricer direct_;
    double center_;
    TableOptions opts_;
    mutable std::map<double, Slot> slots_;
};

} // namespace levyhedge::tables
