// levyhedge: variance-optimal hedging of European claims under exponential Levy models.

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levyhedge/commands.hpp"
#include "levyhedge/config.hpp"
#include "levyhedge/errors.hpp"
#include "levyhedge/report.hpp"

namespace {

using levyhedge::config::RunConfig;

bool is_override(const std::string& arg)
{
    if (arg.rfind("--", 0) != 0) return false;
    const auto name = arg.substr(2, arg.find('=') == std::string::npos ? std::string::npos : arg.find('=') - 2);
    const auto dot = name.find('.');
    return dot != std::string::npos && dot > 0 && dot + 1 < name.size();
}

// Pulls `--section.key=value` and `--section.key value` out of argv.
std::vector<std::pair<std::string, std::string>> take_overrides(std::vector<std::string>& args)
{
    std::vector<std::pair<std::string, std::string>> out;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (!is_override(a)) {
            rest.push_back(a);
            continue;
        }
        const auto eq = a.find('=');
        if (eq != std::string::npos) {
            out.emplace_back(a.substr(2, eq - 2), a.substr(eq + 1));
        } else {
            if (i + 1 >= args.size()) throw levyhedge::ValidationError("config key '" + a.substr(2) + "': missing value");
            out.emplace_back(a.substr(2), args[++i]);
        }
    }
    args = std::move(rest);
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"levyhedge: variance-optimal initial capital, hedge ratios and hedging-error variance "
                 "under exponential Levy models"};
    app.footer("\nOverrides: any config key as --key=value, e.g. --model.tag=merton --payoff.strike=110\n"
               "Exit codes: 0 success, 1 invalid input, 2 numerical failure.\n\n" +
               levyhedge::config::describe_keys());
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, output_path, format;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "config file of key = value lines");
    app.add_option("--output", output_path, "write the table here instead of stdout (output.path)");
    app.add_option("--format", format, "csv | json (output.format)")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", seed, "Monte Carlo seed (mc.seed)");

    auto* price = app.add_subcommand("price", "variance-optimal initial capital V0");
    auto* hedge = app.add_subcommand("hedge", "hedge ratios xi and phi at one spot and date");
    double spot = 0.0, at = -1.0;
    std::optional<double> wealth_gap;
    hedge->add_option("--spot", spot, "stock price (default hedge.S0)");
    hedge->add_option("--at", at, "trading date n in [1, N] (discrete) or time t in [0, T) (continuous); "
                                  "default 1 or 0");
    hedge->add_option("--wealth-gap", wealth_gap, "H - V0 - G at the decision; default 0 gives phi = xi");
    auto* error = app.add_subcommand("error", "variance J0 of the hedging error");
    auto* backtest = app.add_subcommand("backtest", "Monte Carlo backtest against the closed-form J0");
    auto* sweep = app.add_subcommand("sweep", "V0, xi0 and J0 over spot or number of trading dates");
    std::string axis;
    sweep->add_option("--axis", axis, "spot | trading_dates (sweep.axis)")
        ->check(CLI::IsMember({"spot", "trading_dates"}));
    auto* check = app.add_subcommand("payoff-check", "payoff inversion against the closed-form payoff");

    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::pair<std::string, std::string>> overrides;
    try {
        overrides = take_overrides(args);
        std::reverse(args.begin(), args.end());  // CLI11 consumes a reversed vector
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const levyhedge::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        RunConfig cfg;
        if (!config_path.empty()) levyhedge::config::load_file(cfg, config_path);
        for (const auto& [k, v] : overrides) cfg.set(k, v);
        if (!format.empty()) cfg.set("output.format", format);
        if (!output_path.empty()) cfg.set("output.path", output_path);
        if (seed) cfg.set("mc.seed", std::to_string(*seed));
        if (!axis.empty()) cfg.set("sweep.axis", axis);
        const std::string fmt = cfg.choice("output.format", {"csv", "json"});

        levyhedge::cli::Outcome out;
        if (price->parsed()) out = levyhedge::cli::cmd_price(cfg);
        else if (hedge->parsed()) {
            const bool continuous = cfg.choice("hedge.mode", {"discrete", "continuous"}) == "continuous";
            const double s = hedge->count("--spot") ? spot : cfg.positive("hedge.S0");
            const double when = hedge->count("--at") ? at : (continuous ? 0.0 : 1.0);
            out = levyhedge::cli::cmd_hedge(cfg, s, when, wealth_gap);
        } else if (error->parsed()) out = levyhedge::cli::cmd_error(cfg);
        else if (backtest->parsed()) out = levyhedge::cli::cmd_backtest(cfg);
        else if (sweep->parsed()) out = levyhedge::cli::cmd_sweep(cfg);
        else if (check->parsed()) out = levyhedge::cli::cmd_payoff_check(cfg);

        for (const auto& w : out.warnings) std::cerr << w << '\n';
        const std::string path = cfg.text("output.path");
        if (path.empty()) {
            levyhedge::report::write(std::cout, out.table, fmt);
        } else {
            std::ofstream f(path);
            if (!f) throw levyhedge::ValidationError("config key 'output.path': cannot write '" + path + "'");
            levyhedge::report::write(f, out.table, fmt);
        }
        return 0;
    } catch (const levyhedge::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const levyhedge::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}
