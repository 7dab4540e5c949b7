#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dgc::app {

enum ExitCode : int { kOk = 0, kTestFailure = 1, kConfigError = 2, kNumericalError = 3 };

struct CommonOptions {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<long> paths;
  std::optional<int> steps;
  std::optional<std::string> out;
  std::optional<int> threads;
};

// Writes the path dump "path_index,name,tau,m_T,weight_T".
int run_simulate(const CommonOptions& options, std::ostream& out, std::ostream& err);

// Prints every intensity, drift and the Azema supermartingale at the state as JSON.
int run_intensity(const CommonOptions& options, const std::string& state_path, std::ostream& out,
                  std::ostream& err);

// Runs the selected suites (all when empty); exit 0 iff every test passes and every
// negative control fails.
int run_verify(const CommonOptions& options, const std::vector<std::string>& suites, std::ostream& out,
               std::ostream& err);

struct TvaOptions {
  std::optional<std::string> rho_grid;     // comma-separated list
  std::optional<std::string> lambda_bank;  // comma-separated list
  std::string mode = "both";
};

// Emits "rho,lambda_bank,mode,tva,se".
int run_tva(const CommonOptions& options, const TvaOptions& tva, std::ostream& out, std::ostream& err);

// Parses "a,b,c" into numbers; throws std::invalid_argument naming the flag.
std::vector<double> parse_number_list(const std::string& text, const std::string& flag);

// Full command line: dgc <simulate|intensity|verify|tva> [flags].
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dgc::app
