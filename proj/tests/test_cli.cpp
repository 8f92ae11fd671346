#include "cli.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = telewig::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, telewig::cli::kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, telewig::cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--vsq-db", "0:-3:1"}).code, telewig::cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--vsq-db", "-3:0:0"}).code, telewig::cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--vsq-db", "3"}).code, telewig::cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--gain", "fast"}).code, telewig::cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--region", "disk:-1"}).code, telewig::cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--format", "xml"}).code, telewig::cli::kExitUsage);
  EXPECT_EQ(run({"sweep", "--eta", "1.5"}).code, telewig::cli::kExitUsage);
  EXPECT_EQ(run({"conditional", "--region", "point"}).code, telewig::cli::kExitUsage);
  EXPECT_EQ(run({"noisy", "--region", "disk:0.3"}).code, telewig::cli::kExitUsage);
  EXPECT_EQ(run({"threshold", "nope"}).code, telewig::cli::kExitUsage);
  EXPECT_EQ(run({"threshold", "table1", "--eta", "0.4"}).code, telewig::cli::kExitUsage);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, telewig::cli::kExitOk); }

TEST(Cli, SweepCsv) {
  const auto r = run({"sweep", "--vsq-db", "-6:-2:2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], "vsq_db,r,gain,w_origin");
  EXPECT_EQ(l[1].substr(0, 3), "-6,");
  EXPECT_NE(l[1].find("0.6907755279"), std::string::npos);
}

TEST(Cli, UndefinedPointsAreEmpty) {
  const auto r = run({"sweep", "--vsq-db", "0"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out)[1], "0,0,,");
}

TEST(Cli, JsonEchoesConfig) {
  const auto r = run({"conditional", "--vsq-db", "-3", "--eta", "0.6304", "--format", "json", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["command"], "conditional");
  EXPECT_EQ(j["config"]["state"]["name"], "attenuated");
  EXPECT_DOUBLE_EQ(j["config"]["state"]["eta"].get<double>(), 0.6304);
  EXPECT_EQ(j["config"]["region"]["kind"], "disk");
  EXPECT_DOUBLE_EQ(j["config"]["region"]["size"].get<double>(), 0.3);
  EXPECT_EQ(j["config"]["seed"], 7);
  EXPECT_DOUBLE_EQ(j["config"]["squeezing"]["start"].get<double>(), -3.0);
  ASSERT_EQ(j["rows"].size(), 1u);
  EXPECT_TRUE(j["rows"][0]["w_origin"].is_number());
}

TEST(Cli, JsonNullForUndefined) {
  const auto r = run({"sweep", "--vsq-db", "0", "--format", "json"});
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["rows"][0]["gain"].is_null());
}

TEST(Cli, TableOne) {
  const auto r = run({"threshold", "table1"});
  ASSERT_EQ(r.code, 0);
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 7u);
  EXPECT_EQ(l[1], "1,0.3439947652,-1.624181707");
  EXPECT_EQ(l[6].substr(0, 4), "inf,");
}

TEST(Cli, TableTwoDefaultsToUnityGain) {
  const auto r = run({"threshold", "table2", "--noise-db", "2", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["config"]["gain"]["mode"], "unity");
  EXPECT_NEAR(j["rows"][0]["vth_db"].get<double>(), -2.12, 0.01);
  EXPECT_EQ(run({"threshold", "table2", "--gain", "optimal"}).code, telewig::cli::kExitUsage);
}

TEST(Cli, NegativeNumbersAsValues) {
  EXPECT_EQ(run({"sweep", "--vsq-db", "-.5"}).code, 0);
  EXPECT_EQ(run({"sweep", "--vsq-db=-1:-0.5:0.5"}).code, 0);
}

TEST(Cli, OutFile) {
  const std::string path = ::testing::TempDir() + "telewig_cli_out.csv";
  const auto r = run({"threshold", "crossover", "--out", path});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(path);
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "eta,r,vsq_db");
  std::remove(path.c_str());
}

TEST(Cli, VerifyDeterministicAndPerturbable) {
  const auto a = run({"verify", "--samples", "20000", "--seed", "5"});
  const auto b = run({"verify", "--samples", "20000", "--seed", "5"});
  EXPECT_EQ(a.code, telewig::cli::kExitOk) << a.out;
  EXPECT_EQ(a.out, b.out);
  const auto p = run({"verify", "--samples", "20000", "--seed", "5", "--perturb"});
  EXPECT_EQ(p.code, telewig::cli::kExitVerifyFailed);
  EXPECT_NE(p.out.find("channel_quadrature,50"), std::string::npos);
  EXPECT_NE(p.out.find(",fail"), std::string::npos);
}
