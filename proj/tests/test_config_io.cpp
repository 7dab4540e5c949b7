#include "dgc/config_io.hpp"
#include "dgc/errors.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <string>

namespace {

dgc::RunConfig parse(const std::string& text) {
  std::istringstream in(text);
  return dgc::parse_run_config(in);
}

void expect_config_error(const std::string& text, const std::string& field, int line) {
  try {
    parse(text);
    FAIL() << "expected ConfigError for:\n" << text;
  } catch (const dgc::ConfigError& e) {
    EXPECT_EQ(e.field(), field);
    EXPECT_EQ(e.line(), line);
    EXPECT_NE(std::string(e.what()).find("line " + std::to_string(line)), std::string::npos);
  }
}

TEST(ConfigIo, ParsesFullFile) {
  const auto c = parse(
      "# comment\n"
      "rho_copula = 0.3\n"
      "kappa = 0.5\n"
      "n = 2\n"
      "hazards = -1:0.01, 0:0.02, 1:0.03, 2:0.04\n"
      "horizon = 7\n"
      "steps = 70\n"
      "seed = 5\n"
      "paths = 123\n");
  EXPECT_DOUBLE_EQ(c.model.rho_copula, 0.3);
  EXPECT_DOUBLE_EQ(c.model.kappa, 0.5);
  EXPECT_EQ(c.model.n, 2);
  EXPECT_DOUBLE_EQ(c.model.hazard(-1), 0.01);
  EXPECT_DOUBLE_EQ(c.model.hazard(2), 0.04);
  EXPECT_DOUBLE_EQ(c.horizon, 7.0);
  EXPECT_EQ(c.steps, 70);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.paths, 123);
}

TEST(ConfigIo, EmptyFileGivesDefaults) {
  const auto c = parse("");
  EXPECT_EQ(c.model.n, 1);
  EXPECT_EQ(c.model.hazards.size(), 3u);
}

TEST(ConfigIo, RoundTrip) {
  auto c = parse("rho_copula = 0.45\nn = 2\nhazards = -1:0.011, 0:0.021, 1:0.031, 2:0.041\nseed = 99\n");
  const auto again = parse(dgc::format_run_config(c));
  EXPECT_EQ(again.model.hazards, c.model.hazards);
  EXPECT_EQ(again.model.rho_copula, c.model.rho_copula);
  EXPECT_EQ(again.seed, c.seed);
  EXPECT_EQ(dgc::format_run_config(again), dgc::format_run_config(c));
}

TEST(ConfigIo, ErrorsNameFieldAndLine) {
  expect_config_error("rho_copula = 1.2\n", "rho_copula", 1);
  expect_config_error("\nkappa = abc\n", "kappa", 2);
  expect_config_error("seed = 1\nseed = 2\n", "seed", 2);
  expect_config_error("colour = blue\n", "colour", 1);
  expect_config_error("just text\n", "", 1);
  expect_config_error("hazards = -1:0.01, 0:0.01\n", "hazards", 1);
  expect_config_error("n = 1\nhazards = -1:0.01, 0:0.01, 1:0.01, 2:0.01\n", "hazards", 2);
  expect_config_error("steps = 0\n", "steps", 1);
}

TEST(ConfigIo, StateJsonRoundTrip) {
  const auto model = dgc::ModelConfig::defaults();
  auto s = dgc::PortfolioState::initial(model);
  s.t = 2.5;
  s.m = {0.1, -0.3, 0.7};
  s.add_default(model, 1, 1.25);
  const auto back = dgc::state_from_json(dgc::state_to_json(s), model);
  EXPECT_EQ(back, s);
}

TEST(ConfigIo, StateMissingResidualNamesField) {
  const auto model = dgc::ModelConfig::defaults();
  const std::string text = R"({"t": 2, "m": {"1": 0.2}, "defaults": [{"name": 1, "tau": 1.0}]})";
  try {
    dgc::state_from_json(text, model);
    FAIL();
  } catch (const dgc::ConfigError& e) {
    EXPECT_EQ(e.field(), "defaults[0].residual");
    EXPECT_NE(std::string(e.what()).find("defaults[0].residual"), std::string::npos);
  }
}

TEST(ConfigIo, StateSchemaErrors) {
  const auto model = dgc::ModelConfig::defaults();
  EXPECT_THROW(dgc::state_from_json("{", model), dgc::ConfigError);
  EXPECT_THROW(dgc::state_from_json(R"({"m": {}})", model), dgc::ConfigError);
  EXPECT_THROW(dgc::state_from_json(R"({"t": 1, "m": {"7": 0}})", model), dgc::ConfigError);
  EXPECT_THROW(dgc::state_from_json(R"({"t": 1, "defaults": [{"name": 1, "tau": 3, "residual": 0}]})", model),
               dgc::ConfigError);
}

}  // namespace
