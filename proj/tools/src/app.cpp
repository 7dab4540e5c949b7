#include "dgc_app/app.hpp"

#include "dgc/config_io.hpp"
#include "dgc/errors.hpp"
#include "dgc/intensity.hpp"
#include "dgc/simulator.hpp"
#include "dgc/tva.hpp"
#include "dgc/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace dgc::app {
namespace {

RunConfig load_config(const CommonOptions& options) {
  RunConfig rc = options.config_path ? load_run_config(*options.config_path) : RunConfig{};
  if (options.seed) rc.seed = *options.seed;
  if (options.paths) {
    if (*options.paths < 1) throw ConfigError("paths", 0, "must be >= 1");
    rc.paths = *options.paths;
  }
  if (options.steps) {
    if (*options.steps < 1) throw ConfigError("steps", 0, "must be >= 1");
    rc.steps = *options.steps;
  }
  return rc;
}

int threads_of(const CommonOptions& options) {
  if (options.threads && *options.threads < 1) throw ConfigError("threads", 0, "must be >= 1");
  return options.threads ? *options.threads : default_parallelism();
}

// Sends text to --out when given, else to the stream.
void emit(const CommonOptions& options, std::ostream& out, const std::string& text) {
  if (!options.out) {
    out << text;
    return;
  }
  std::ofstream file(*options.out, std::ios::binary);
  if (!file) throw ConfigError("out", 0, "cannot open '" + *options.out + "' for writing");
  file << text;
  if (!file) throw ConfigError("out", 0, "write to '" + *options.out + "' failed");
}

// Maps exceptions onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const MissingResidual& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::out_of_range& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  }
}

bool all_finite(const std::vector<double>& xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    if (first == std::string::npos) throw std::invalid_argument(flag + ": empty list entry");
    item = item.substr(first, last - first + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !std::isfinite(v)) throw std::invalid_argument(flag + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument(flag + ": empty list");
  return out;
}

int run_simulate(const CommonOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig rc = load_config(options);
    const GridSpec grid{rc.horizon, rc.steps};
    grid.validate();
    const IntensityEngine engine(rc.model, QuadratureConfig{32, 8.0, 1e-9});
    auto paths = map_paths(rc.model, grid, SeedSpec{rc.seed}, static_cast<std::uint64_t>(rc.paths), threads_of(options),
                           [&](const PathRecord& p) {
                             PathRecord copy = p;
                             copy.weight = doleans_weight(p, engine, grid);
                             return copy;
                           });
    for (const PathRecord& p : paths) {
      if (!all_finite(p.weight) || !std::isfinite(p.weight.back()))
        throw std::domain_error("simulate: non-finite weight on path " + std::to_string(p.path_index));
    }
    std::ostringstream text;
    write_path_dump(text, paths);
    emit(options, out, text.str());
    return static_cast<int>(kOk);
  });
}

int run_intensity(const CommonOptions& options, const std::string& state_path, std::ostream& out,
                  std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig rc = load_config(options);
    const PortfolioState state = load_state(state_path, rc.model);
    const IntensityEngine engine(rc.model);
    const IntensityReport r = engine.report(state);
    const std::vector<const std::vector<double>*> fields{&r.gamma_G, &r.gamma_F_bar, &r.gamma_F_tilde,
                                                         &r.beta_G, &r.beta_F_bar, &r.beta_F_tilde};
    for (const auto* f : fields)
      if (!all_finite(*f)) throw std::domain_error("intensity: non-finite value");
    if (!(r.azema > 0.0 && r.azema <= 1.0)) throw std::domain_error("intensity: S outside (0,1]");
    nlohmann::ordered_json j;
    j["t"] = r.t;
    j["names"] = r.names;
    j["gamma_G"] = r.gamma_G;
    j["gamma_F_bar"] = r.gamma_F_bar;
    j["gamma_F_tilde"] = r.gamma_F_tilde;
    j["beta_G"] = r.beta_G;
    j["beta_F_bar"] = r.beta_F_bar;
    j["beta_F_tilde"] = r.beta_F_tilde;
    j["azema"] = r.azema;
    emit(options, out, j.dump(2) + "\n");
    return static_cast<int>(kOk);
  });
}

int run_verify(const CommonOptions& options, const std::vector<std::string>& suites, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig rc = load_config(options);
    const std::vector<std::string> selected = suites.empty() ? suite_names() : suites;
    for (const auto& s : selected)
      if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
        throw ConfigError("suite", 0, "unknown suite '" + s + "'");
    SuiteOptions so;
    so.seed = rc.seed;
    so.paths = static_cast<std::uint64_t>(options.paths ? *options.paths : 100000);
    so.parallelism = threads_of(options);
    std::vector<VerifyReport> reports;
    for (const auto& s : selected) {
      auto part = run_named_suite(s, rc.model, so);
      reports.insert(reports.end(), part.begin(), part.end());
    }
    for (const auto& r : reports)
      if (!std::isfinite(r.estimate)) throw std::domain_error("verify: non-finite estimate in " + r.name);
    std::ostringstream csv;
    write_reports_csv(csv, reports);
    if (options.out) emit(options, out, csv.str());
    write_reports_table(out, reports);
    const bool ok = all_satisfied(reports);
    out << (ok ? "all tests passed and all negative controls failed\n" : "verification FAILED\n");
    return static_cast<int>(ok ? kOk : kTestFailure);
  });
}

int run_tva(const CommonOptions& options, const TvaOptions& tva, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig rc = load_config(options);
    TvaRunSpec spec;
    if (tva.rho_grid) spec.rho_grid = parse_number_list(*tva.rho_grid, "rho-grid");
    if (tva.lambda_bank) spec.bank_hazards = parse_number_list(*tva.lambda_bank, "lambda-bank");
    if (tva.mode == "true") spec.modes = {TvaMode::True};
    else if (tva.mode == "fake") spec.modes = {TvaMode::Fake};
    else if (tva.mode == "both") spec.modes = {TvaMode::True, TvaMode::Fake};
    else throw ConfigError("mode", 0, "must be true, fake or both");
    spec.seed = rc.seed;
    if (options.paths) spec.paths = static_cast<std::uint64_t>(*options.paths);
    spec.parallelism = threads_of(options);
    const std::vector<TvaRow> rows = run_tva(spec, rc.model);
    for (const TvaRow& r : rows)
      if (!std::isfinite(r.tva) || !std::isfinite(r.se)) throw std::domain_error("tva: non-finite result");
    std::ostringstream csv;
    write_tva_csv(csv, rows);
    emit(options, out, csv.str());
    return static_cast<int>(kOk);
  });
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App cli{"Dynamic Gaussian copula default model: simulation, intensities, verification and TVA"};
  cli.require_subcommand(1);
  CommonOptions common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "Run configuration file");
    sub->add_option("--seed", common.seed, "Master seed");
    sub->add_option("--paths", common.paths, "Number of scenarios");
    sub->add_option("--steps", common.steps, "Grid steps");
    sub->add_option("--out", common.out, "Output file");
    sub->add_option("--threads", common.threads, "Worker threads (results do not depend on it)");
  };
  CLI::App* simulate = cli.add_subcommand("simulate", "Write the per-path default dump");
  add_common(simulate);
  CLI::App* intensity = cli.add_subcommand("intensity", "Evaluate intensities and drifts at a state");
  add_common(intensity);
  std::string state_path;
  intensity->add_option("--state", state_path, "State file (JSON)")->required();
  CLI::App* verify = cli.add_subcommand("verify", "Run statistical verification suites");
  add_common(verify);
  std::vector<std::string> suites;
  verify->add_option("--suite", suites, "Suite name (repeatable)");
  CLI::App* tva_cmd = cli.add_subcommand("tva", "Wrong-way-risk TVA sweep");
  add_common(tva_cmd);
  TvaOptions tva;
  tva_cmd->add_option("--rho-grid", tva.rho_grid, "Comma-separated correlation values");
  tva_cmd->add_option("--lambda-bank", tva.lambda_bank, "Comma-separated bank hazard rates");
  tva_cmd->add_option("--mode", tva.mode, "true, fake or both");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, r;
    const int code = cli.exit(e, o, r);
    out << o.str();
    err << r.str();
    return code == 0 ? static_cast<int>(kOk) : static_cast<int>(kConfigError);
  }
  if (simulate->parsed()) return run_simulate(common, out, err);
  if (intensity->parsed()) return run_intensity(common, state_path, out, err);
  if (verify->parsed()) return run_verify(common, suites, out, err);
  return run_tva(common, tva, out, err);
}

}  // namespace dgc::app
