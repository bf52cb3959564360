#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "levyhedge/commands.hpp"
#include "levyhedge/config.hpp"
#include "levyhedge/report.hpp"

using namespace levyhedge;

namespace {

struct Run {
    int status;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run run_cli(const std::string& args)
{
    const auto dir = std::filesystem::temp_directory_path();
    const auto out = dir / "levyhedge_cli_test.out", err = dir / "levyhedge_cli_test.err";
    const std::string cmd =
        std::string(LEVYHEDGE_CLI_PATH) + " " + args + " > " + out.string() + " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

} // namespace

TEST(Config, ParsesKeyValueTextWithComments)
{
    const auto cfg = config::parse("# comment\nmodel.tag = merton  # trailing\n\nhedge.N=4\n");
    EXPECT_EQ(cfg.text("model.tag"), "merton");
    EXPECT_EQ(cfg.integer("hedge.N"), 4);
    EXPECT_EQ(cfg.real("hedge.S0"), 100.0);  // default
    EXPECT_FALSE(cfg.has("hedge.capital"));
}

TEST(Config, UnknownKeysAndBadValuesNameTheKey)
{
    try {
        config::parse("hedge.n = 4\n");
        FAIL() << "expected a throw";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("hedge.n"), std::string::npos);
    }
    auto cfg = config::parse("hedge.T = soon\n");
    try {
        (void)cfg.positive("hedge.T");
        FAIL() << "expected a throw";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("hedge.T"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("soon"), std::string::npos);
    }
    EXPECT_THROW(config::parse("no equals sign\n"), ValidationError);
    EXPECT_THROW(config::model(config::parse("model.tag = nig\nmodel.alpha = 1\nmodel.beta = 2\n")), InputError);
    EXPECT_THROW(config::payoff(config::parse("payoff.kind = power_call\npayoff.power = 2.5\n")), InputError);
}

TEST(Config, ModelOverridesApply)
{
    const auto m = config::model(config::parse("model.tag = gaussian\nmodel.sigma = 0.3\n"));
    ASSERT_TRUE(std::holds_alternative<models::Gaussian>(m));
    EXPECT_EQ(std::get<models::Gaussian>(m).sigma, 0.3);
}

TEST(Report, CsvIsRoundTripAndQuoted)
{
    report::Table t;
    t.columns = {"a", "b", "c"};
    t.add({0.1, std::string("x,y"), std::int64_t{7}});
    t.add({std::nan(""), std::string("q\"q"), true});
    std::ostringstream os;
    report::write(os, t, "csv");
    EXPECT_EQ(os.str(), "a,b,c\n1e-01,\"x,y\",7\nnan,\"q\"\"q\",true\n");
    EXPECT_EQ(std::stod(report::format_real(0.1 + 0.2)), 0.1 + 0.2);
}

TEST(Report, JsonIsAnArrayOfRecords)
{
    report::Table t;
    t.columns = {"x", "y"};
    t.add({1.5, std::string("s")});
    t.add({INFINITY, false});
    std::ostringstream os;
    report::write(os, t, "json");
    const auto j = nlohmann::json::parse(os.str());
    ASSERT_TRUE(j.is_array());
    ASSERT_EQ(j.size(), 2u);
    EXPECT_EQ(j[0]["x"], 1.5);
    EXPECT_EQ(j[1]["x"], "inf");
    EXPECT_EQ(j[1]["y"], false);
}

TEST(Commands, EmptySweepStillHasTheHeader)
{
    const auto out = cli::cmd_sweep(config::parse("sweep.count = 0\n"));
    EXPECT_TRUE(out.table.rows.empty());
    std::ostringstream os;
    report::write(os, out.table, "csv");
    EXPECT_EQ(first_line(os.str()).substr(0, 14), "trading_dates,");
}

TEST(Commands, MertonNegativeCapitalIsReported)
{
    const auto out = cli::cmd_price(config::parse("model.tag = merton\nmodel.mu = 0.01\nmodel.sigma = 0.03\n"
                                                  "model.jump_intensity = 0.01\nmodel.jump_mean = 0.2\n"
                                                  "model.jump_sd = 0.02\npayoff.strike = 110\nhedge.T = 1\n"));
    ASSERT_EQ(out.table.rows.size(), 1u);
    ASSERT_FALSE(out.warnings.empty());
    EXPECT_NE(out.warnings.front().find("NEGATIVE-CAPITAL"), std::string::npos);
}

TEST(Cli, SuccessWritesCsvToStdout)
{
    const auto r = run_cli("price --hedge.N=4");
    EXPECT_EQ(r.status, 0) << r.err;
    EXPECT_EQ(first_line(r.out).substr(0, 5), "mode,");
}

TEST(Cli, JsonFormatAndDottedOverrides)
{
    const auto r = run_cli("--format json error --model.tag gaussian --hedge.mode=discrete");
    ASSERT_EQ(r.status, 0) << r.err;
    const auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0]["mode"], "discrete");
}

TEST(Cli, InputErrorsExitWithOne)
{
    auto r = run_cli("price --hedge.T=-1");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("hedge.T"), std::string::npos) << r.err;
    r = run_cli("price --hedge.bogus=1");
    EXPECT_EQ(r.status, 1);
    EXPECT_NE(r.err.find("hedge.bogus"), std::string::npos) << r.err;
    r = run_cli("no-such-command");
    EXPECT_EQ(r.status, 1);
    r = run_cli("backtest --model.tag=hyperbolic --hedge.T=1 --mc.paths=10");
    EXPECT_EQ(r.status, 1) << r.err;
}

TEST(Cli, ConfigFileIsRead)
{
    const auto path = std::filesystem::temp_directory_path() / "levyhedge_cli_test.cfg";
    std::ofstream(path) << "model.tag = vg\nhedge.N = 3\nhedge.mode = discrete\n";
    const auto r = run_cli("--config " + path.string() + " price");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NE(r.out.find("vg"), std::string::npos);
}
