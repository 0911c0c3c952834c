#include "rosenblatt/cli.hpp"
#include "rosenblatt/config.hpp"
#include "rosenblatt/errors.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rosen;

namespace {

struct CliRun {
    int code = 0;
    std::string out, err;
};

CliRun run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / ("rosen_cli_test_" + name)).string();
}

}  // namespace

TEST(ConfigParser, KeyValueLinesWithComments) {
    std::istringstream in("# comment\nhurst = 0.8\n\n  grid=64  # trailing\nou.lambda = 2.5\n");
    auto m = parse_flat_config(in);
    EXPECT_EQ(m.size(), 3u);
    EXPECT_EQ(m["hurst"], "0.8");
    EXPECT_EQ(m["grid"], "64");
    RunConfig c;
    apply_config(c, m);
    EXPECT_EQ(c.hurst, 0.8);
    EXPECT_EQ(c.grid_n, 64);
    EXPECT_EQ(c.get("ou.lambda", 0.0), 2.5);
    EXPECT_EQ(c.get("missing", 7.0), 7.0);
    std::istringstream bad("no equals sign\n");
    EXPECT_THROW(parse_flat_config(bad), DomainError);
    RunConfig d;
    EXPECT_THROW(apply_config(d, {{"format", "xml"}}), DomainError);
    d.options["x"] = "abc";
    EXPECT_THROW(d.get("x", 0.0), DomainError);
}

TEST(Cli, SimulateIsByteIdenticalAcrossRunsAndThreadCounts) {
    std::vector<std::string> args = {"simulate", "--grid", "32", "--samples", "5", "--seed", "9", "--format", "csv"};
    CliRun a = run(args), b = run(args);
    std::vector<std::string> threaded = {"--threads", "3"};
    threaded.insert(threaded.end(), args.begin(), args.end());
    CliRun c = run(threaded);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
    EXPECT_EQ(a.out.substr(0, a.out.find('\n')), "t,path_0,path_1,path_2,path_3,path_4");
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 34);
    EXPECT_EQ(a.out.find(';'), std::string::npos);
}

TEST(Cli, SimulateJsonCarriesConfig) {
    CliRun r = run({"simulate", "--grid", "16", "--samples", "10", "--method", "fbm"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["config"]["grid"], 16);
    EXPECT_EQ(j["config"]["options"]["simulate.method"], "fbm");
    EXPECT_TRUE(j["pass"].get<bool>());
    EXPECT_EQ(j["results"]["paths"], 10);
}

TEST(Cli, UsageErrorsExitWithTwo) {
    EXPECT_EQ(run({"simulate", "--hurst", "0.4"}).code, 2);
    EXPECT_EQ(run({"simulate", "--bogus"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"simulate", "--method", "nope", "--grid", "8"}).code, 2);
    EXPECT_EQ(run({"estimate", "--grid", "64", "--samples", "1"}).code, 2);
    CliRun r = run({"simulate", "--format", "xml"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("usage error"), std::string::npos);
}

TEST(Cli, HelpExitsWithZero) {
    CliRun r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST(Cli, ItoX2ReportsResidual) {
    CliRun r = run({"verify", "ito-x2", "--grid", "16", "--samples", "50"});
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["results"].contains("residual_l2"));
    EXPECT_TRUE(j["results"].contains("residual_l2_ablated"));
    EXPECT_EQ(r.code, j["pass"].get<bool>() ? 0 : 1);
}

TEST(Cli, CumulantsReportTheoryAndEmpirics) {
    CliRun r = run({"cumulants", "--order", "2,3", "--t", "1.0", "--hurst", "0.7", "--grid", "32", "--samples", "2000"});
    ASSERT_NE(r.code, 2) << r.err;
    auto j = nlohmann::json::parse(r.out);
    ASSERT_EQ(j["results"].size(), 2u);
    EXPECT_EQ(j["results"][1]["order"], 3);
    EXPECT_NEAR(j["results"][0]["theoretical"].get<double>(), 1.0, 1e-8);
    EXPECT_TRUE(j["results"][1].contains("empirical"));
}

TEST(Cli, ConfigFileIsOverriddenByFlags) {
    std::string cfg = temp_path("config.txt");
    {
        std::ofstream f(cfg);
        f << "grid = 8\nsamples = 3\nseed = 4\nformat = csv\n";
    }
    CliRun a = run({"--config", cfg, "simulate"});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 10);
    CliRun b = run({"--config", cfg, "simulate", "--grid", "16"});
    EXPECT_EQ(std::count(b.out.begin(), b.out.end(), '\n'), 18);
    EXPECT_EQ(run({"--config", temp_path("missing.txt"), "simulate"}).code, 2);
    std::remove(cfg.c_str());
}

TEST(Cli, OutputFileAndEstimateRoundTrip) {
    std::string csv = temp_path("path.csv");
    CliRun a = run({"ou", "--grid", "64", "--format", "csv", "--output", csv});
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_TRUE(a.out.empty());
    std::string sim = temp_path("sim.csv");
    ASSERT_EQ(run({"simulate", "--grid", "512", "--samples", "1", "--format", "csv", "--output", sim}).code, 0);
    CliRun e = run({"estimate", "--input", sim});
    ASSERT_EQ(e.code, 0) << e.err;
    auto j = nlohmann::json::parse(e.out);
    EXPECT_TRUE(j["results"].contains("hurst_mean"));
    std::remove(csv.c_str());
    std::remove(sim.c_str());
}

TEST(Cli, EstimateReadsEveryPathColumn) {
    std::string sim = temp_path("sim3.csv");
    ASSERT_EQ(run({"simulate", "--grid", "256", "--samples", "3", "--format", "csv", "--output", sim}).code, 0);
    CliRun e = run({"estimate", "--input", sim});
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_EQ(nlohmann::json::parse(e.out)["results"]["paths"].get<int>(), 3);
    std::remove(sim.c_str());

    std::string bad = temp_path("bad.csv");
    {
        std::ofstream f(bad);
        f << "t,value\n0,0\n0.3,1\n1,2\n";
    }
    EXPECT_EQ(run({"estimate", "--input", bad}).code, 2);
    std::remove(bad.c_str());
}

TEST(Cli, OuAndSpdeJson) {
    CliRun o = run({"ou", "--grid", "128", "--lambda", "2", "--sigma", "0.5"});
    ASSERT_EQ(o.code, 0) << o.err;
    EXPECT_LT(nlohmann::json::parse(o.out)["results"]["residual"].get<double>(), 1e-2);
    CliRun s = run({"spde", "--grid", "32", "--samples", "200", "--modes", "2"});
    ASSERT_NE(s.code, 2) << s.err;
    auto j = nlohmann::json::parse(s.out);
    EXPECT_TRUE(j["results"].contains("trace_condition"));
}
