#include "dgc/config_io.hpp"

#include "dgc/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace dgc {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(const std::string& text, const std::string& field, int line) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(value))
    throw ConfigError(field, line, "expected a finite number, got '" + t + "'");
  return value;
}

template <typename Int>
Int parse_integer(const std::string& text, const std::string& field, int line) {
  const std::string t = trim(text);
  Int value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    throw ConfigError(field, line, "expected an integer, got '" + t + "'");
  return value;
}

std::map<int, double> parse_hazards(const std::string& text, int line) {
  std::map<int, double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos)
      throw ConfigError("hazards", line, "expected entries of the form name:rate, got '" + trim(item) + "'");
    const int name = parse_integer<int>(item.substr(0, colon), "hazards", line);
    const double rate = parse_double(item.substr(colon + 1), "hazards", line);
    if (!(rate > 0.0)) throw ConfigError("hazards", line, "rate of name " + std::to_string(name) + " must be > 0");
    if (!out.emplace(name, rate).second)
      throw ConfigError("hazards", line, "name " + std::to_string(name) + " listed twice");
  }
  if (out.empty()) throw ConfigError("hazards", line, "no entries");
  return out;
}

}  // namespace

RunConfig parse_run_config(std::istream& in) {
  RunConfig cfg;
  std::map<int, double> hazards;
  int hazards_line = 0;
  int n_line = 0;
  bool n_given = false;
  std::map<std::string, int> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string content = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError("", line, "expected 'key = value'");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (!seen.emplace(key, line).second)
      throw ConfigError(key, line, "duplicate key (first set on line " + std::to_string(seen[key]) + ")");
    if (key == "rho_copula") {
      cfg.model.rho_copula = parse_double(value, key, line);
      if (!(cfg.model.rho_copula >= 0.0 && cfg.model.rho_copula < 1.0))
        throw ConfigError(key, line, "must lie in [0,1)");
    } else if (key == "kappa") {
      cfg.model.kappa = parse_double(value, key, line);
      if (!(cfg.model.kappa > 0.0)) throw ConfigError(key, line, "must be > 0");
    } else if (key == "n") {
      cfg.model.n = parse_integer<int>(value, key, line);
      if (cfg.model.n < 1) throw ConfigError(key, line, "must be >= 1");
      n_given = true;
      n_line = line;
    } else if (key == "hazards") {
      hazards = parse_hazards(value, line);
      hazards_line = line;
    } else if (key == "horizon") {
      cfg.horizon = parse_double(value, key, line);
      if (!(cfg.horizon > 0.0)) throw ConfigError(key, line, "must be > 0");
    } else if (key == "steps") {
      cfg.steps = parse_integer<int>(value, key, line);
      if (cfg.steps < 1) throw ConfigError(key, line, "must be >= 1");
    } else if (key == "seed") {
      cfg.seed = parse_integer<std::uint64_t>(value, key, line);
    } else if (key == "paths") {
      cfg.paths = parse_integer<long>(value, key, line);
      if (cfg.paths < 1) throw ConfigError(key, line, "must be >= 1");
    } else {
      throw ConfigError(key, line, "unknown key");
    }
  }
  if (!hazards.empty()) {
    const int max_name = hazards.rbegin()->first;
    if (!n_given) cfg.model.n = std::max(1, max_name);
    const int n = cfg.model.n;
    for (const auto& [name, rate] : hazards)
      if (name < kBank || name > n)
        throw ConfigError("hazards", hazards_line, "name " + std::to_string(name) + " outside {-1..." + std::to_string(n) + "}");
    cfg.model.hazards.assign(n + 2, 0.0);
    for (int name = kBank; name <= n; ++name) {
      const auto it = hazards.find(name);
      if (it == hazards.end())
        throw ConfigError("hazards", hazards_line, "missing rate for name " + std::to_string(name));
      cfg.model.hazards[name_index(name)] = it->second;
    }
  } else if (n_given && cfg.model.n != 1) {
    throw ConfigError("hazards", n_line, "required when n differs from 1");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", 0, "cannot open '" + path + "'");
  return parse_run_config(in);
}

std::string format_run_config(const RunConfig& config) {
  std::ostringstream out;
  out.precision(17);
  out << "rho_copula = " << config.model.rho_copula << "\n";
  out << "kappa = " << config.model.kappa << "\n";
  out << "n = " << config.model.n << "\n";
  out << "hazards = ";
  for (int name = kBank; name <= config.model.n; ++name)
    out << (name == kBank ? "" : ", ") << name << ":" << config.model.hazard(name);
  out << "\n";
  out << "horizon = " << config.horizon << "\n";
  out << "steps = " << config.steps << "\n";
  out << "seed = " << config.seed << "\n";
  out << "paths = " << config.paths << "\n";
  return out.str();
}

std::string state_to_json(const PortfolioState& state) {
  nlohmann::ordered_json j;
  j["t"] = state.t;
  nlohmann::ordered_json m = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < state.m.size(); ++i) m[std::to_string(index_name(static_cast<int>(i)))] = state.m[i];
  j["m"] = m;
  nlohmann::ordered_json defaults = nlohmann::ordered_json::array();
  for (const auto& d : state.defaults) {
    nlohmann::ordered_json rec;
    rec["name"] = d.name;
    rec["tau"] = d.tau;
    if (d.residual) rec["residual"] = *d.residual;
    defaults.push_back(rec);
  }
  j["defaults"] = defaults;
  return j.dump(2);
}

PortfolioState state_from_json(const std::string& text, const ModelConfig& config) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("state", 0, std::string("invalid JSON: ") + e.what());
  }
  auto number = [](const nlohmann::json& node, const std::string& field) {
    if (!node.is_number()) throw ConfigError(field, 0, "expected a number");
    return node.get<double>();
  };
  if (!j.is_object()) throw ConfigError("state", 0, "expected a JSON object");
  PortfolioState s = PortfolioState::initial(config);
  if (!j.contains("t")) throw ConfigError("t", 0, "missing");
  s.t = number(j["t"], "t");
  if (j.contains("m")) {
    const auto& m = j["m"];
    if (!m.is_object()) throw ConfigError("m", 0, "expected an object keyed by name");
    for (auto it = m.begin(); it != m.end(); ++it) {
      int name = 0;
      const std::string& key = it.key();
      const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), name);
      if (ec != std::errc() || ptr != key.data() + key.size() || name < kBank || name > config.n)
        throw ConfigError("m." + key, 0, "unknown name");
      s.m[name_index(name)] = number(it.value(), "m." + key);
    }
  }
  if (j.contains("defaults")) {
    const auto& list = j["defaults"];
    if (!list.is_array()) throw ConfigError("defaults", 0, "expected an array");
    for (std::size_t a = 0; a < list.size(); ++a) {
      const std::string field = "defaults[" + std::to_string(a) + "]";
      const auto& rec = list[a];
      if (!rec.is_object()) throw ConfigError(field, 0, "expected an object");
      if (!rec.contains("name") || !rec["name"].is_number_integer()) throw ConfigError(field + ".name", 0, "missing integer name");
      if (!rec.contains("tau")) throw ConfigError(field + ".tau", 0, "missing");
      DefaultRecord d;
      d.name = rec["name"].get<int>();
      d.tau = number(rec["tau"], field + ".tau");
      if (rec.contains("residual")) d.residual = number(rec["residual"], field + ".residual");
      s.defaults.push_back(d);
    }
  }
  s.validate(config);
  return s;
}

PortfolioState load_state(const std::string& path, const ModelConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("state", 0, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return state_from_json(buffer.str(), config);
}

}  // namespace dgc
