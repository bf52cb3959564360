#pragma once

// Frozen reference values. The one-period least-squares values come from
// tests/support/oracles.py (normal variance-mean mixtures in mpmath, no
// transforms); special-function values from mpmath at 30 digits.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "levyhedge/models.hpp"

namespace oracle {

using cplx = std::complex<double>;

constexpr double S0 = 100.0;
constexpr double K = 99.0;

struct OneStep {
    const char* model;
    const char* payoff;
    double V0, xi, J0;
};

inline levyhedge::models::LevyModelSpec model(const std::string& name)
{
    using namespace levyhedge::models;
    if (name == "gaussian") return Gaussian{0.05, 0.2};
    if (name == "merton") return Merton{0.05, 0.15, 2.0, -0.05, 0.08};
    if (name == "nig") return NIG{75.49, -4.089, 3.024, -0.04};
    if (name == "vg") return VarianceGamma{2500.0, -5.0, 100.0, 0.2};
    return Hyperbolic{75.0, -4.0, 0.01, 0.02};  // "hyperbolic", exact law at T = 1
}

inline double horizon(const std::string& name) { return name == "hyperbolic" ? 1.0 : 0.25; }

// N = 1, S0 = 100, K = 99
inline const std::vector<OneStep>& one_step()
{
    static const std::vector<OneStep> v = {
        {"gaussian", "call", 4.4334316696312235, 0.62758015521320257, 8.5986097024722551},
        {"gaussian", "put", 3.4334316696312235, -0.37241984478679743, 8.5986097024722551},
        {"gaussian", "digital", 0.52160485322252535, 0.038202699766117348, 0.094757843070055601},
        {"merton", "call", 4.2895468219240833, 0.49102935540311906, 9.3343584388605662},
        {"merton", "put", 3.2895468219240833, -0.50897064459688094, 9.3343584388605662},
        {"merton", "digital", 0.55107875506524212, 0.039925407508993204, 0.098196632720463541},
        {"nig", "call", 4.1569220853436955, 0.39617342105208978, 8.0670328758639512},
        {"nig", "put", 3.1569220853436955, -0.60382657894791022, 8.0670328758639512},
        {"nig", "digital", 0.51598342674680029, 0.03878943782247982, 0.086438756318705011},
        {"vg", "call", 4.4767781373638495, 0.59231088431082115, 9.008822519872381},
        {"vg", "put", 3.4767781373638495, -0.40768911568917885, 9.008822519872381},
        {"vg", "digital", 0.52476639093708279, 0.038791423998796336, 0.094547904186493276},
        {"hyperbolic", "call", 1.3669733708489079, 0.86318279899249313, 0.20953122813115793},
        {"hyperbolic", "put", 0.36697337084890795, -0.13681720100750687, 0.20953122813115793},
        {"hyperbolic", "digital", 0.78187114688133778, 0.074171071811859087, 0.048292306991516576},
    };
    return v;
}

// moment-matched Gaussian of the NIG law (per unit time)
constexpr double nig_benchmark_sigma = 0.20058721103750607;
constexpr double nig_benchmark_mu = -0.18392153586562015;

struct Complex1 {
    cplx arg, value;
};
struct Complex2 {
    cplx a, b, value;
};

inline const std::vector<Complex1>& bessel_k1()
{
    static const std::vector<Complex1> v = {
        {{0.3, 0.2}, {2.0031791996818548, -1.6210739129237935}},
        {{1.9, -0.7}, {0.092254949242662807, 0.12145994780781648}},
        {{2.5, 3.0}, {-0.051846856248374978, 0.019488901707587287}},
        {{8.0, 0.5}, {0.0001336022385335069, -7.8965780231771768e-5}},
        {{40.0, -25.0}, {7.7163113198847118e-19, 1.1717135058265058e-19}},
        {{0.75, 0.0}, {0.94958046696214023, 0.0}},
    };
    return v;
}

inline const std::vector<Complex1>& log_gamma()
{
    static const std::vector<Complex1> v = {
        {{0.5, 0.5}, {0.11238724280962311, -0.75072920212205074}},
        {{3.2, -1.1}, {0.66926942467623229, -1.1269063043551896}},
        {{-2.5, 0.3}, {-0.43208889261320192, -9.0933454212897415}},
        {{12.0, 40.0}, {-19.336433860020052, 123.98922537157304}},
        {{-30.5, 2.0}, {-80.752043718079084, -90.519925797532026}},
    };
    return v;
}

inline const std::vector<Complex2>& beta()
{
    static const std::vector<Complex2> v = {
        {{2.5, 0.0}, {0.5, 3.0}, {-0.066385978332463856, -0.011137552343050482}},
        {{3.5, 0.0}, {-20.3, 1.5}, {-2.9777317480145761e-5, 0.0001053057178785103}},
    };
    return v;
}

// hyperbolic (alpha, beta, delta, mu) = (75, -4, 0.01, 0.02)
inline const std::vector<Complex1>& hyperbolic_cumulant()
{
    static const std::vector<Complex1> v = {
        {{1.0, 0.0}, {0.018452487643231068, 0.0}},
        {{1.5, 10.0}, {0.0058871984667622918, 0.18912582050217314}},
        {{0.5, -60.0}, {-0.62835712752173486, -1.1393113871241451}},
        {{2.0, 200.0}, {-3.1026965490872681, 3.9670466603640699}},
    };
    return v;
}

// Black-Scholes with zero rate (the stock is already discounted)
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double bs_call(double S, double K, double T, double sigma)
{
    const double sd = sigma * std::sqrt(T);
    const double d1 = std::log(S / K) / sd + 0.5 * sd;
    return S * norm_cdf(d1) - K * norm_cdf(d1 - sd);
}

inline double bs_delta(double S, double K, double T, double sigma)
{
    const double sd = sigma * std::sqrt(T);
    return norm_cdf(std::log(S / K) / sd + 0.5 * sd);
}

} // namespace oracle
