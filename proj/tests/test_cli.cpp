#include "dgc_app/app.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "dgc");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = dgc::app::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dgc_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

TEST_F(Cli, SimulateWritesDump) {
  const auto r = run({"simulate", "--paths", "3", "--steps", "10", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("path_index,name,tau,m_T,weight_T\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1 + 3 * 3);
  EXPECT_EQ(run({"simulate", "--paths", "3", "--steps", "10", "--seed", "5", "--threads", "2"}).out, r.out);
}

TEST_F(Cli, SimulateToFile) {
  const std::string out = (dir_ / "paths.csv").string();
  ASSERT_EQ(run({"simulate", "--paths", "2", "--steps", "5", "--out", out}).code, 0);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "path_index,name,tau,m_T,weight_T");
}

TEST_F(Cli, IntensityNearTimeZero) {
  const std::string state = write("state.json", R"({"t": 1e-4, "m": {"-1": 0, "0": 0, "1": 0}, "defaults": []})");
  const std::string config = write("run.cfg", "rho_copula = 0.5\nhazards = -1:0.01, 0:0.02, 1:0.03\n");
  const auto r = run({"intensity", "--config", config, "--state", state});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  const std::vector<double> hazards{0.01, 0.02, 0.03};
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(j["gamma_G"][i].get<double>() / hazards[i], 1.0, 0.05);
  const double s = j["azema"].get<double>();
  EXPECT_GT(s, 0.0);
  EXPECT_LE(s, 1.0);
}

TEST_F(Cli, IntensityMissingResidualNamesField) {
  const std::string state = write("state.json", R"({"t": 2, "defaults": [{"name": 1, "tau": 1}]})");
  const auto r = run({"intensity", "--state", state});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("defaults[0].residual"), std::string::npos) << r.err;
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  const std::string bad = write("bad.cfg", "rho_copula = 2\n");
  const auto r = run({"simulate", "--config", bad, "--paths", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("rho_copula"), std::string::npos);
  EXPECT_EQ(run({"simulate", "--config", (dir_ / "absent.cfg").string()}).code, 2);
  EXPECT_EQ(run({"verify", "--suite", "nope"}).code, 2);
  EXPECT_EQ(run({"tva", "--mode", "sideways", "--paths", "10"}).code, 2);
  EXPECT_EQ(run({"tva", "--rho-grid", "0,x", "--paths", "10"}).code, 2);
  EXPECT_EQ(run({"simulate", "--paths", "0"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
}

TEST_F(Cli, NumericalErrorExitsThree) {
  const std::string state = write("state.json", R"({"t": 1, "m": {"-1": -1e308, "0": 0, "1": 0}})");
  const auto r = run({"intensity", "--state", state});
  EXPECT_EQ(r.code, 3) << r.out << r.err;
}

TEST_F(Cli, VerifyAppendixPasses) {
  const std::string out = (dir_ / "report.csv").string();
  const auto r = run({"verify", "--suite", "appendix", "--out", out});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("all tests passed and all negative controls failed"), std::string::npos);
  std::ifstream in(out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "name,estimate,se,target,z,verdict,negative_control");
}

TEST_F(Cli, TvaWritesCsv) {
  const auto r = run({"tva", "--rho-grid", "0,0.5", "--lambda-bank", "0.01", "--paths", "200", "--mode", "true"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("rho,lambda_bank,mode,tva,se\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
  EXPECT_EQ(r.out.find(",fake,"), std::string::npos);
}

TEST(CliParsing, NumberLists) {
  EXPECT_EQ(dgc::app::parse_number_list("0, 0.2,0.4", "rho-grid"), (std::vector<double>{0.0, 0.2, 0.4}));
  EXPECT_THROW(dgc::app::parse_number_list("", "rho-grid"), std::invalid_argument);
  EXPECT_THROW(dgc::app::parse_number_list("1,,2", "rho-grid"), std::invalid_argument);
  EXPECT_THROW(dgc::app::parse_number_list("nan", "rho-grid"), std::invalid_argument);
}

}  // namespace
