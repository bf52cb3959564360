#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "levyhedge/errors.hpp"
#include "levyhedge/models.hpp"
#include "levyhedge/payoffs.hpp"

namespace levyhedge::config {

struct KeySpec {
    std::string key;
    std::string fallback;  // empty: unset, meaning given in `help`
    std::string help;
};

/// Every recognised key with its default. Model parameters left empty take
/// the model's own defaults.
inline const std::vector<KeySpec>& keys()
{
    static const std::vector<KeySpec> k = {
        {"model.tag", "nig", "gaussian | merton | nig | vg | hyperbolic"},
        {"model.mu", "", "drift of the log price (model default)"},
        {"model.sigma", "", "diffusion volatility, gaussian and merton (0.2)"},
        {"model.jump_intensity", "", "merton jump intensity lambda (0)"},
        {"model.jump_mean", "", "merton mean log jump nu (0)"},
        {"model.jump_sd", "", "merton log jump sd tau (0)"},
        {"model.alpha", "", "nig (75.49), vg (10), hyperbolic (75)"},
        {"model.beta", "", "nig (-4.089), vg (0), hyperbolic (0)"},
        {"model.delta", "", "nig (3.024), vg (1), hyperbolic (0.01)"},
        {"payoff.kind", "call",
         "call | put | call_low_moment | power_call | power_call_fractional | self_quanto | digital | "
         "log_contract | stock"},
        {"payoff.strike", "99", "strike K"},
        {"payoff.power", "2", "exponent of power_call (integer) and power_call_fractional"},
        {"payoff.abscissa", "", "override of the contour abscissa (negative line for log_contract)"},
        {"payoff.abscissa_pos", "", "positive line of log_contract (0.5)"},
        {"hedge.mode", "continuous", "discrete | continuous"},
        {"hedge.S0", "100", "initial stock price"},
        {"hedge.T", "0.25", "maturity in years"},
        {"hedge.N", "12", "number of trading periods (discrete mode)"},
        {"hedge.capital", "", "fixed initial capital c (default V0)"},
        {"mc.paths", "100000", "Monte Carlo paths"},
        {"mc.steps", "", "rebalancing steps of continuous backtests (default hedge.N)"},
        {"mc.seed", "42", "Monte Carlo seed"},
        {"mc.antithetic", "false", "antithetic Gaussian pairs"},
        {"output.format", "csv", "csv | json"},
        {"output.path", "", "output file (default stdout)"},
        {"sweep.axis", "trading_dates", "spot | trading_dates"},
        {"sweep.from", "1", "first grid value"},
        {"sweep.to", "63", "last grid value"},
        {"sweep.count", "63", "number of grid points (0 gives an empty table)"},
        {"check.s_min", "50", "payoff-check grid start"},
        {"check.s_max", "150", "payoff-check grid end"},
        {"check.points", "101", "payoff-check grid size"},
    };
    return k;
}

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

/// Flat dotted key = value configuration with defaults filled in.
class RunConfig {
public:
    RunConfig()
    {
        for (const auto& k : keys()) values_[k.key] = k.fallback;
    }

    void set(const std::string& key, const std::string& value)
    {
        auto it = values_.find(key);
        if (it == values_.end()) throw ValidationError("unknown config key '" + key + "'");
        it->second = trim(value);
    }

    bool has(const std::string& key) const { return !raw(key).empty(); }

    const std::string& raw(const std::string& key) const
    {
        auto it = values_.find(key);
        if (it == values_.end()) throw ValidationError("unknown config key '" + key + "'");
        return it->second;
    }

    std::string text(const std::string& key) const { return raw(key); }

    double real(const std::string& key) const
    {
        const std::string& s = raw(key);
        double v = 0.0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v))
            throw bad(key, "a finite real number", s);
        return v;
    }
    std::optional<double> real_opt(const std::string& key) const
    {
        if (!has(key)) return std::nullopt;
        return real(key);
    }
    double positive(const std::string& key) const
    {
        const double v = real(key);
        if (!(v > 0.0)) throw bad(key, "a positive number", raw(key));
        return v;
    }

    std::int64_t integer(const std::string& key) const
    {
        const std::string& s = raw(key);
        std::int64_t v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) throw bad(key, "an integer", s);
        return v;
    }
    std::uint64_t u64(const std::string& key) const
    {
        const std::string& s = raw(key);
        std::uint64_t v = 0;
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
            throw bad(key, "an unsigned 64-bit integer", s);
        return v;
    }

    bool boolean(const std::string& key) const
    {
        const std::string& s = raw(key);
        if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
        if (s == "false" || s == "0" || s == "no" || s == "off") return false;
        throw bad(key, "true or false", s);
    }

    std::string choice(const std::string& key, const std::vector<std::string>& allowed) const
    {
        const std::string& s = raw(key);
        if (std::find(allowed.begin(), allowed.end(), s) != allowed.end()) return s;
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : " | ") + a;
        throw bad(key, list, s);
    }

    static ValidationError bad(const std::string& key, const std::string& expected, const std::string& got)
    {
        return ValidationError("config key '" + key + "': expected " + expected + ", got '" + got + "'");
    }

private:
    std::map<std::string, std::string> values_;
};

/// Reads `key = value` lines; `#` starts a comment.
inline void load_stream(RunConfig& cfg, std::istream& in, const std::string& origin = "config")
{
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        cfg.set(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
    }
}

inline void load_file(RunConfig& cfg, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file '" + path + "'");
    load_stream(cfg, in, path);
}

inline RunConfig parse(const std::string& text)
{
    RunConfig cfg;
    std::istringstream in(text);
    load_stream(cfg, in);
    return cfg;
}

namespace detail {

template <class M>
void set_if(const RunConfig& cfg, const char* key, double M::*field, M& m)
{
    if (cfg.has(key)) m.*field = cfg.real(key);
}

inline models::LevyModelSpec checked(models::LevyModelSpec m)
{
    try {
        models::validate(m);
    } catch (const InputError& e) {
        throw ValidationError(std::string("config keys model.*: ") + e.what());
    }
    return m;
}

} // namespace detail

inline models::LevyModelSpec model(const RunConfig& cfg)
{
    using namespace models;
    using detail::set_if;
    const std::string tag = cfg.choice("model.tag", {"gaussian", "merton", "nig", "vg", "hyperbolic"});
    if (tag == "gaussian") {
        Gaussian m;
        set_if(cfg, "model.mu", &Gaussian::mu, m);
        set_if(cfg, "model.sigma", &Gaussian::sigma, m);
        if (m.sigma < 0.0) throw RunConfig::bad("model.sigma", "a non-negative number", cfg.raw("model.sigma"));
        return detail::checked(m);
    }
    if (tag == "merton") {
        Merton m;
        set_if(cfg, "model.mu", &Merton::mu, m);
        set_if(cfg, "model.sigma", &Merton::sigma, m);
        set_if(cfg, "model.jump_intensity", &Merton::jump_intensity, m);
        set_if(cfg, "model.jump_mean", &Merton::jump_mean, m);
        set_if(cfg, "model.jump_sd", &Merton::jump_sd, m);
        if (m.sigma < 0.0) throw RunConfig::bad("model.sigma", "a non-negative number", cfg.raw("model.sigma"));
        if (m.jump_intensity < 0.0)
            throw RunConfig::bad("model.jump_intensity", "a non-negative number", cfg.raw("model.jump_intensity"));
        if (m.jump_sd < 0.0) throw RunConfig::bad("model.jump_sd", "a non-negative number", cfg.raw("model.jump_sd"));
        return detail::checked(m);
    }
    auto four = [&](auto m) {
        using M = decltype(m);
        set_if(cfg, "model.alpha", &M::alpha, m);
        set_if(cfg, "model.beta", &M::beta, m);
        set_if(cfg, "model.delta", &M::delta, m);
        set_if(cfg, "model.mu", &M::mu, m);
        if (!(m.delta > 0.0)) throw RunConfig::bad("model.delta", "a positive number", cfg.raw("model.delta"));
        if (!(m.alpha > 0.0)) throw RunConfig::bad("model.alpha", "a positive number", cfg.raw("model.alpha"));
        return detail::checked(m);
    };
    if (tag == "nig") return four(NIG{});
    if (tag == "vg") return four(VarianceGamma{});
    return four(Hyperbolic{});
}

/// The payoff's transform measure, with abscissa overrides applied.
inline payoffs::TransformMeasure payoff(const RunConfig& cfg)
{
    const std::string kind =
        cfg.choice("payoff.kind", {"call", "put", "call_low_moment", "power_call", "power_call_fractional",
                                   "self_quanto", "digital", "log_contract", "stock"});
    const auto R = cfg.real_opt("payoff.abscissa");
    auto strike = [&] { return cfg.positive("payoff.strike"); };
    try {
        if (kind == "call") return R ? payoffs::call(strike(), *R) : payoffs::call(strike());
        if (kind == "put") return R ? payoffs::put(strike(), *R) : payoffs::put(strike());
        if (kind == "call_low_moment")
            return R ? payoffs::call_low_moment(strike(), *R) : payoffs::call_low_moment(strike());
        if (kind == "power_call") {
            const auto n = cfg.integer("payoff.power");
            if (n < 2 || n > 64) throw RunConfig::bad("payoff.power", "an integer in [2, 64]", cfg.raw("payoff.power"));
            return payoffs::power_call(strike(), static_cast<int>(n), R);
        }
        if (kind == "power_call_fractional")
            return payoffs::power_call_fractional(strike(), cfg.positive("payoff.power"), R);
        if (kind == "self_quanto") return R ? payoffs::self_quanto_call(strike(), *R) : payoffs::self_quanto_call(strike());
        if (kind == "digital") return R ? payoffs::digital(strike(), *R) : payoffs::digital(strike());
        if (kind == "log_contract")
            return payoffs::log_contract(R.value_or(-0.5), cfg.real_opt("payoff.abscissa_pos").value_or(0.5));
        return payoffs::stock();
    } catch (const ValidationError&) {
        throw;
    } catch (const InputError& e) {
        throw ValidationError(std::string("config keys payoff.*: ") + e.what());
    }
}

/// --help text listing every key and its default.
inline std::string describe_keys()
{
    std::ostringstream os;
    os << "Config keys (file lines `key = value`, or flags `--key=value`):\n";
    for (const auto& k : keys()) {
        os << "  " << k.key;
        for (std::size_t i = k.key.size(); i < 22; ++i) os << ' ';
        os << (k.fallback.empty() ? "(unset)" : k.fallback) << "  " << k.help << '\n';
    }
    return os.str();
}

} // namespace levyhedge::config
