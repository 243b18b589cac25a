#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pam/cli.hpp"

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = pam::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

TEST(RunConfig, RoundTrip) {
  pam::RunConfig c{"mc-verify", {{"n", 2}, {"t", 0.5}, {"measure", "dirac"}, {"p", {2.0, 4.0}}}};
  const auto text = c.to_json().dump();
  const auto back = pam::RunConfig::from_json(nlohmann::ordered_json::parse(text));
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.to_json().dump(), text);
}

TEST(RunConfig, RejectsUnknownTopLevelKey) {
  EXPECT_THROW(pam::RunConfig::from_json({{"command", "paths"}, {"parms", {}}}), std::invalid_argument);
}

TEST(Cli, PathsMatchesFigure) {
  const auto r = call({"paths", "--n", "4"});
  ASSERT_EQ(r.code, pam::kExitOk) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 8u);
  const std::vector<std::string> want{"2110", "2101", "2020", "2011", "1210", "1201", "1120", "1111"};
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const auto j = nlohmann::json::parse(ls[i]);
    EXPECT_EQ(j["a"], want[i]);
    EXPECT_EQ(j["path_heights"].size(), 4u);
  }
}

TEST(Cli, LogsResolvedConfig) {
  const auto r = call({"paths", "--n", "3"});
  EXPECT_NE(r.err.find(R"({"command":"paths","params":{"n":3}})"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, pam::kExitUsage);
  EXPECT_EQ(call({"frobnicate"}).code, pam::kExitUsage);
  EXPECT_EQ(call({"paths", "--m", "4"}).code, pam::kExitUsage);
  EXPECT_EQ(call({"paths", "--n", "four"}).code, pam::kExitUsage);
  EXPECT_EQ(call({"paths", "--n", "0"}).code, pam::kExitUsage);
  EXPECT_EQ(call({"bound-table", "--H0", "0.4"}).code, pam::kExitUsage);
  EXPECT_EQ(call({"j0", "--measure", "cauchy"}).code, pam::kExitUsage);
  EXPECT_EQ(call({"dirichlet", "--alpha", "-1.5", "--beta", "0"}).code, pam::kExitUsage);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(call({"paths", "--help"}).code, pam::kExitOk); }

TEST(Cli, ConfigFileAndOverride) {
  const auto cfg = temp_file("pam_cfg.json", R"({"command":"paths","params":{"n":3}})");
  auto r = call({"paths", "--config", cfg.string()});
  ASSERT_EQ(r.code, pam::kExitOk) << r.err;
  EXPECT_EQ(lines(r.out).size(), 4u);
  r = call({"paths", "--config", cfg.string(), "--n", "5"});
  EXPECT_EQ(lines(r.out).size(), 16u);
}

TEST(Cli, ConfigUnknownKeyNamesIt) {
  const auto cfg = temp_file("pam_bad.json", R"({"params":{"n":3,"depth":2}})");
  const auto r = call({"paths", "--config", cfg.string()});
  EXPECT_EQ(r.code, pam::kExitUsage);
  EXPECT_NE(r.err.find("'depth'"), std::string::npos) << r.err;
}

TEST(Cli, ConfigWrongType) {
  const auto cfg = temp_file("pam_type.json", R"({"params":{"n":"three"}})");
  EXPECT_EQ(call({"paths", "--config", cfg.string()}).code, pam::kExitUsage);
}

TEST(Cli, IdentityExplicitInputs) {
  const auto r = call({"identity", "--x", "1/2,3,5/7"});
  ASSERT_EQ(r.code, pam::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["holds"].get<bool>());
  EXPECT_EQ(j["example"]["lhs"], j["example"]["rhs"]);
}

TEST(Cli, GammaScanCsv) {
  const auto r = call({"gamma-scan", "--H0", "0.8", "--H", "0.3", "--n-max", "3"});
  ASSERT_EQ(r.code, pam::kExitOk) << r.err;
  const auto ls = lines(r.out);
  EXPECT_EQ(ls.front(), "H0,H,n,a,gamma_n");
  EXPECT_EQ(ls.size(), 1u + 1 + 2 + 4);
  EXPECT_EQ(ls[1], "0.80000000000000004,0.29999999999999999,1,1,1");
}

TEST(Cli, DirichletOracle) {
  const auto r = call({"dirichlet", "--t", "1", "--alpha", "1", "--beta", "1", "--oracle"});
  ASSERT_EQ(r.code, pam::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["closed_form"].get<double>(), 1.0 / 6, 1e-15);
  EXPECT_TRUE(j["oracle"]["agrees"].get<bool>());
}

TEST(Cli, J0Report) {
  const auto r = call({"j0", "--t", "2", "--x", "1", "--measure", "x2"});
  ASSERT_EQ(r.code, pam::kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["j0"].get<double>(), 3.0, 1e-12);
  EXPECT_TRUE(j["cond_mu0"]["holds"].get<bool>());
}

TEST(Cli, BoundTableMonotoneInT) {
  const auto r = call({"bound-table", "--H0", "0.75", "--H", "0.3", "--p", "2", "--t", "1,2,4,8"});
  ASSERT_EQ(r.code, pam::kExitOk) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0].substr(0, 35), "t,p,series_value,envelope_value,log");
  double prev = -1e300;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    std::istringstream row(ls[i]);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) v.push_back(std::stod(cell));
    EXPECT_GT(v[4], prev);
    EXPECT_GE(v[5], v[4]);
    prev = v[4];
  }
}

TEST(Cli, McVerifyDeterministicAndWritesFile) {
  const std::vector<std::string> args{"mc-verify", "--n", "1", "--samples", "20000", "--seed", "3",
                                      "--workers", "2", "--lemma-tuples", "2", "--lemma-samples", "2000"};
  const auto a = call(args);
  const auto b = call(args);
  ASSERT_EQ(a.code, pam::kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_EQ(j["lemma32"].size(), 2u);

  const auto dir = std::filesystem::temp_directory_path() / "pam_out";
  std::filesystem::create_directories(dir);
  setenv("PAMBOUND_OUTPUT_DIR", dir.c_str(), 1);
  auto with_output = args;
  with_output.insert(with_output.end(), {"--output", "report.json"});
  const auto c = call(with_output);
  unsetenv("PAMBOUND_OUTPUT_DIR");
  EXPECT_EQ(c.code, pam::kExitOk);
  EXPECT_TRUE(c.out.empty());
  std::ifstream in(dir / "report.json");
  std::stringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), a.out);
}

TEST(Cli, McVerifyFailureExitsOne) {
  // A bound scaled far below the estimate must fail the check.
  const auto r = call({"mc-verify", "--n", "2", "--b", "0.01", "--samples", "20000"});
  EXPECT_EQ(r.code, pam::kExitVerificationFailure) << r.err;
}

}  // namespace
