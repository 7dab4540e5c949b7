#pragma once

#include "dgc/model.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace dgc {

// Contents of a run configuration file.
//
//   # comment
//   rho_copula = 0.3
//   kappa = 0.25
//   hazards = -1:0.01, 0:0.01, 1:0.01
//   horizon = 10
//   steps = 200
//   seed = 42
//   paths = 100000
//
// Every key is optional; hazards must name each of -1, 0, 1..n exactly once.
struct RunConfig {
  ModelConfig model = ModelConfig::defaults();
  double horizon = 10.0;
  int steps = 200;
  std::uint64_t seed = 20240917;
  long paths = 100000;
};

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::string& path);
std::string format_run_config(const RunConfig& config);

// State files are JSON objects: {"t": .., "m": {"-1": .., ...}, "defaults": [{"name": .., "tau": .., "residual": ..}]}.
std::string state_to_json(const PortfolioState& state);
PortfolioState state_from_json(const std::string& text, const ModelConfig& config);
PortfolioState load_state(const std::string& path, const ModelConfig& config);

}  // namespace dgc
