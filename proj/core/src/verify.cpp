#include "dgc/verify.hpp"

#include "dgc/errors.hpp"
#include "dgc/normal.hpp"
#include "dgc/stats.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace dgc {
namespace {

using Clock = std::chrono::steady_clock;

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string rho_tag(const ModelConfig& config) { return "rho=" + fixed(config.rho_copula); }

void stamp(std::vector<VerifyReport>& reports, Clock::time_point start) {
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  for (auto& r : reports) r.runtime_seconds = seconds;
}

// Grid index of a checkpoint, which must be a grid time.
int checkpoint_index(const GridSpec& grid, double t) {
  for (int k = 0; k <= grid.steps; ++k)
    if (std::abs(grid.time(k) - t) <= 1e-12 * grid.horizon) return k;
  throw std::invalid_argument("checkpoint " + number(t) + " is not a grid time");
}

std::vector<int> checkpoint_indices(const GridSpec& grid, const std::vector<double>& checkpoints) {
  std::vector<int> out;
  for (double t : checkpoints) out.push_back(checkpoint_index(grid, t));
  return out;
}

// Column view of per-path sample rows.
std::vector<double> column(const std::vector<std::vector<double>>& rows, std::size_t c) {
  std::vector<double> out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = rows[i][c];
  return out;
}

void check_finite(const std::vector<double>& xs, const std::string& what) {
  for (double x : xs)
    if (!std::isfinite(x)) throw std::domain_error(what + ": non-finite sample");
}

// gamma^G per name, then gamma_bar and gamma_tilde per name (reference names only).
struct IntensityTriple {
  std::vector<double> values;
};

IntensityTriple intensity_triple(const IntensityEngine& engine, const PortfolioState& state) {
  const ModelConfig& config = engine.config();
  const int names = config.name_count();
  IntensityTriple out;
  out.values.assign(3 * names, 0.0);
  const SetEval g = engine.evaluate(state, SetKind::G);
  const SetEval bar = engine.evaluate(state, SetKind::FBar);
  const auto defaulted = [&](int name) {
    const DefaultRecord* d = state.find_default(name);
    return d != nullptr && d->tau <= state.t;
  };
  // Before any default of bank or counterparty the reduction uses exactly the full sets.
  const bool reuse = !defaulted(kBank) && !defaulted(kCounterparty);
  const SetEval tilde = reuse ? SetEval{} : engine.evaluate(state, SetKind::FTilde);
  const SetEval& t_eval = reuse ? g : tilde;
  for (int name = kBank; name <= config.n; ++name) {
    const int i = name_index(name);
    out.values[i] = engine.gamma_from(g, name);
    if (name >= 1) {
      out.values[names + i] = engine.gamma_from(bar, name);
      out.values[2 * names + i] = engine.gamma_from(t_eval, name);
    }
  }
  return out;
}

// Cumulative trapezoid integrals of the intensity triple at each checkpoint index, split at
// every default inside a step.
std::vector<double> intensity_integrals(const PathRecord& path, const IntensityEngine& engine,
                                        const GridSpec& grid, const std::vector<int>& checkpoints) {
  const ModelConfig& config = engine.config();
  const std::size_t width = 3 * static_cast<std::size_t>(config.name_count());
  std::vector<double> acc(width, 0.0), out;
  out.reserve(width * checkpoints.size());
  const int last = *std::max_element(checkpoints.begin(), checkpoints.end());
  auto add = [&](const IntensityTriple& a, const IntensityTriple& b, double length) {
    for (std::size_t i = 0; i < width; ++i) acc[i] += 0.5 * (a.values[i] + b.values[i]) * length;
  };
  IntensityTriple left = intensity_triple(engine, state_at_grid(path, config, 0));
  std::size_t next = 0;
  auto emit = [&](int k) {
    while (next < checkpoints.size() && checkpoints[next] == k) {
      out.insert(out.end(), acc.begin(), acc.end());
      ++next;
    }
  };
  emit(0);
  for (int k = 0; k < last; ++k) {
    double left_time = path.times[k];
    for (const DefaultEvent& e : defaults_in_step(path, grid, k)) {
      const IntensityTriple right = intensity_triple(engine, state_at_default(path, config, e.name, false));
      add(left, right, e.tau - left_time);
      left = intensity_triple(engine, state_at_default(path, config, e.name, true));
      left_time = e.tau;
    }
    const IntensityTriple right = intensity_triple(engine, state_at_grid(path, config, k + 1));
    add(left, right, path.times[k + 1] - left_time);
    left = right;
    emit(k + 1);
  }
  return out;
}

double median_of(std::vector<double> xs) {
  if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

VerifyReport z_report(std::string name, double estimate, double se, double target, bool negative_control) {
  VerifyReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.standard_error = se;
  r.target = target;
  const double diff = estimate - target;
  r.z = se > 0.0 ? diff / se : (diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff));
  r.pass = std::abs(r.z) <= kZThreshold;
  r.negative_control = negative_control;
  return r;
}

VerifyReport paired_report(std::string name, std::span<const double> estimate_samples,
                           std::span<const double> target_samples, bool negative_control) {
  if (estimate_samples.size() != target_samples.size())
    throw std::invalid_argument("paired_report: sample sizes differ");
  MeanAccumulator est, tgt, diff;
  for (std::size_t i = 0; i < estimate_samples.size(); ++i) {
    est.add(estimate_samples[i]);
    tgt.add(target_samples[i]);
    diff.add(estimate_samples[i] - target_samples[i]);
  }
  VerifyReport r = z_report(std::move(name), diff.mean(), diff.standard_error(), 0.0, negative_control);
  r.estimate = est.mean();
  r.target = tgt.mean();
  return r;
}

VerifyReport tolerance_report(std::string name, double estimate, double target, double tolerance) {
  VerifyReport r;
  r.name = std::move(name);
  r.estimate = estimate;
  r.target = target;
  r.pass = std::abs(estimate - target) <= tolerance;
  return r;
}

std::vector<VerifyReport> compensator_suite(const ModelConfig& config, const GridSpec& grid,
                                            const std::vector<double>& checkpoints,
                                            const std::vector<Scope>& scopes,
                                            const SuiteOptions& options) {
  const auto start = Clock::now();
  grid.validate();
  const std::vector<int> ks = checkpoint_indices(grid, checkpoints);
  const IntensityEngine engine(config, options.quad);
  const int names = config.name_count();
  const std::size_t width = 3 * static_cast<std::size_t>(names);

  // Per path: the intensity integrals per checkpoint followed by the default indicators.
  const auto rows = map_paths(config, grid, SeedSpec{options.seed}, options.paths, options.parallelism,
                              [&](const PathRecord& path) {
                                std::vector<double> row = intensity_integrals(path, engine, grid, ks);
                                for (std::size_t c = 0; c < ks.size(); ++c)
                                  for (int i = 0; i < names; ++i)
                                    row.push_back(path.tau[i] <= grid.time(ks[c]) ? 1.0 : 0.0);
                                return row;
                              });
  const std::size_t indicator_base = width * ks.size();

  std::vector<VerifyReport> reports;
  const std::string tag = rho_tag(config);
  auto cell = [&](const std::string& label, std::size_t c, int name, std::size_t offset, bool control) {
    const int i = name_index(name);
    const std::vector<double> integral = column(rows, c * width + offset + i);
    const std::vector<double> indicator = column(rows, indicator_base + c * names + i);
    check_finite(integral, label);
    reports.push_back(paired_report("compensator." + label + "." + tag + ".name=" + std::to_string(name) +
                                        ".t=" + number(checkpoints[c]),
                                    integral, indicator, control));
  };
  for (Scope scope : scopes) {
    for (std::size_t c = 0; c < ks.size(); ++c) {
      if (scope == Scope::G) {
        for (int name = kBank; name <= config.n; ++name) cell("G", c, name, 0, false);
      } else {
        for (int name = 1; name <= config.n; ++name) cell("F_bar", c, name, names, false);
      }
    }
    if (scope == Scope::F && options.negative_controls) {
      const std::size_t c = ks.size() - 1;
      for (int name = 1; name <= config.n; ++name) cell("F_tilde_unweighted", c, name, 2 * names, true);
    }
  }
  stamp(reports, start);
  return reports;
}

std::vector<VerifyReport> projection_suite(const ModelConfig& config, const std::vector<double>& checkpoints,
                                           const SuiteOptions& options) {
  const auto start = Clock::now();
  const double horizon = *std::max_element(checkpoints.begin(), checkpoints.end());
  // Every checkpoint must be an integer multiple of a unit step up to the horizon.
  const GridSpec grid{horizon, static_cast<int>(std::llround(horizon))};
  grid.validate();
  const std::vector<int> ks = checkpoint_indices(grid, checkpoints);
  const IntensityEngine engine(config, options.quad);
  constexpr int kChoices = 3;

  // Per path and checkpoint: S_t X and 1{t < tau} X for each choice of X.
  const auto rows = map_paths(config, grid, SeedSpec{options.seed}, options.paths, options.parallelism,
                              [&](const PathRecord& path) {
                                std::vector<double> row;
                                const double tau = std::min(path.tau_of(kBank), path.tau_of(kCounterparty));
                                for (int k : ks) {
                                  const PortfolioState state = state_at_grid(path, config, k);
                                  const double t = state.t;
                                  const double s = engine.azema_S(state);
                                  if (!(s > 0.0 && s <= 1.0)) throw std::domain_error("projection: S outside (0,1]");
                                  const double alive = t < tau ? 1.0 : 0.0;
                                  const double xs[kChoices] = {1.0, path.tau_of(1) <= t ? 1.0 : 0.0,
                                                               std::max(state.m_of(1), 0.0)};
                                  for (double x : xs) {
                                    row.push_back(s * x);
                                    row.push_back(alive * x);
                                  }
                                }
                                return row;
                              });
  const char* labels[kChoices] = {"X=1", "X=1{tau_1<=t}", "X=max(m1_t,0)"};
  std::vector<VerifyReport> reports;
  for (std::size_t c = 0; c < ks.size(); ++c) {
    for (int x = 0; x < kChoices; ++x) {
      const std::size_t base = (c * kChoices + x) * 2;
      reports.push_back(paired_report("projection." + rho_tag(config) + "." + labels[x] + ".t=" + number(checkpoints[c]),
                                      column(rows, base), column(rows, base + 1)));
    }
  }
  stamp(reports, start);
  return reports;
}

std::vector<VerifyReport> measure_change_suite(const ModelConfig& config, const GridSpec& grid,
                                               const std::vector<double>& checkpoints, int drift_name,
                                               const SuiteOptions& options) {
  const auto start = Clock::now();
  grid.validate();
  const std::vector<int> ks = checkpoint_indices(grid, checkpoints);
  const int split = ks.size() >= 2 ? ks[ks.size() - 2] : 0;
  const int last = ks.back();
  const IntensityEngine engine(config, options.quad);
  const int n = config.n;

  // Row layout: W_T | per checkpoint and reference name: W (1 - int gamma_tilde), W int..., see below.
  struct Row {
    double weight_T;
    std::vector<double> compensator_tilde;  // per checkpoint and reference name
    std::vector<double> compensator_bar;    // per reference name at the last checkpoint
    std::vector<double> drift_tilde;        // per checkpoint
    double drift_bar;                       // at the last checkpoint
    double late_increment;                  // W_T (B_T - B_s - int_s^T beta_tilde) over the last interval
    bool cell_positive;                     // sign of m^k at the second-to-last checkpoint
  };
  const auto rows = map_paths(config, grid, SeedSpec{options.seed}, options.paths, options.parallelism,
                              [&](const PathRecord& path) {
                                const ReducedWalk walk = reduced_walk(path, engine, grid);
                                Row row;
                                row.weight_T = walk.weight.back();
                                for (int k : ks) {
                                  const double w = walk.weight[k];
                                  for (int j = 1; j <= n; ++j) {
                                    const double hit = path.tau_of(j) <= grid.time(k) ? 1.0 : 0.0;
                                    row.compensator_tilde.push_back(w * (hit - walk.at(walk.gamma_tilde, k, j)));
                                  }
                                  row.drift_tilde.push_back(w * (path.b_at(k, drift_name) - walk.at(walk.beta_tilde, k, drift_name)));
                                }
                                const double w_last = walk.weight[last];
                                for (int j = 1; j <= n; ++j) {
                                  const double hit = path.tau_of(j) <= grid.time(last) ? 1.0 : 0.0;
                                  row.compensator_bar.push_back(w_last * (hit - walk.at(walk.gamma_bar, last, j)));
                                }
                                row.drift_bar = w_last * (path.b_at(last, drift_name) - walk.at(walk.beta_bar, last, drift_name));
                                row.late_increment = w_last * (path.b_at(last, drift_name) - path.b_at(split, drift_name) -
                                                               (walk.at(walk.beta_tilde, last, drift_name) -
                                                                walk.at(walk.beta_tilde, split, drift_name)));
                                row.cell_positive = path.m_at(split, drift_name) > 0.0;
                                return row;
                              });

  const std::string tag = rho_tag(config);
  std::vector<VerifyReport> reports;
  auto mean_report = [&](const std::string& name, const std::vector<double>& xs, double target, bool control) {
    check_finite(xs, name);
    const MeanAccumulator acc = summarize(xs);
    reports.push_back(z_report(name, acc.mean(), acc.standard_error(), target, control));
  };
  std::vector<double> xs(rows.size());
  for (std::size_t p = 0; p < rows.size(); ++p) xs[p] = rows[p].weight_T;
  mean_report("measure_change.weight_mean." + tag + ".t=" + number(grid.horizon), xs, 1.0, false);

  for (std::size_t c = 0; c < ks.size(); ++c) {
    for (int j = 1; j <= n; ++j) {
      for (std::size_t p = 0; p < rows.size(); ++p) xs[p] = rows[p].compensator_tilde[c * n + (j - 1)];
      mean_report("measure_change.compensator_tilde." + tag + ".name=" + std::to_string(j) + ".t=" + number(checkpoints[c]),
                  xs, 0.0, false);
    }
    for (std::size_t p = 0; p < rows.size(); ++p) xs[p] = rows[p].drift_tilde[c];
    mean_report("measure_change.drift_tilde." + tag + ".name=" + std::to_string(drift_name) + ".t=" + number(checkpoints[c]),
                xs, 0.0, false);
  }

  // Increments over the last interval, conditioned on the sign of m^k at its start. Cells
  // below 30 paths are merged.
  std::size_t positive = 0;
  for (const Row& r : rows) positive += r.cell_positive ? 1 : 0;
  const std::string interval = number(grid.time(split)) + "-" + number(grid.time(last));
  if (positive >= 30 && rows.size() - positive >= 30) {
    for (int sign = 0; sign < 2; ++sign) {
      for (std::size_t p = 0; p < rows.size(); ++p)
        xs[p] = (rows[p].cell_positive == (sign == 1)) ? rows[p].late_increment : 0.0;
      mean_report("measure_change.drift_tilde_cell." + tag + ".name=" + std::to_string(drift_name) + ".m" +
                      (sign == 1 ? ">0" : "<=0") + ".interval=" + interval,
                  xs, 0.0, false);
    }
  } else {
    for (std::size_t p = 0; p < rows.size(); ++p) xs[p] = rows[p].late_increment;
    mean_report("measure_change.drift_tilde_cell." + tag + ".name=" + std::to_string(drift_name) +
                    ".merged.interval=" + interval,
                xs, 0.0, false);
  }

  if (options.negative_controls) {
    const std::string t_last = number(checkpoints.back());
    for (int j = 1; j <= n; ++j) {
      for (std::size_t p = 0; p < rows.size(); ++p) xs[p] = rows[p].compensator_bar[j - 1];
      mean_report("measure_change.compensator_bar_weighted." + tag + ".name=" + std::to_string(j) + ".t=" + t_last,
                  xs, 0.0, true);
    }
    for (std::size_t p = 0; p < rows.size(); ++p) xs[p] = rows[p].drift_bar;
    mean_report("measure_change.drift_bar_weighted." + tag + ".name=" + std::to_string(drift_name) + ".t=" + t_last,
                xs, 0.0, true);
  }
  stamp(reports, start);
  return reports;
}

std::vector<VerifyReport> jeulin_yor_suite(const ModelConfig& config, const GridSpec& grid,
                                           const SuiteOptions& options) {
  const auto start = Clock::now();
  grid.validate();
  const IntensityEngine engine(config, options.quad);
  const int names = config.name_count();

  // Per path: int (beta_tilde - beta_bar) and the realized covariation, summed over names,
  // over the grid steps that start before tau. Both use the values at the start of each step,
  // as the realized covariation of an Ito sum does.
  const auto rows = map_paths(config, grid, SeedSpec{options.seed}, options.paths, options.parallelism,
                              [&](const PathRecord& path) {
                                const ReducedWalk walk = reduced_walk(path, engine, grid);
                                const double tau = std::min(path.tau_of(kBank), path.tau_of(kCounterparty));
                                int stop = grid.steps;
                                for (int k = 0; k <= grid.steps; ++k) {
                                  if (path.times[k] >= tau) {
                                    stop = k;
                                    break;
                                  }
                                }
                                double drift = 0.0, covariation = 0.0;
                                for (int name = kBank; name < names - 1; ++name) {
                                  drift += walk.at(walk.drift_gap_left, stop, name);
                                  covariation += walk.at(walk.covariation, stop, name);
                                }
                                return std::pair<double, double>{drift, covariation};
                              });
  std::vector<double> drift(rows.size()), covariation(rows.size()), flipped(rows.size());
  for (std::size_t p = 0; p < rows.size(); ++p) {
    drift[p] = rows[p].first;
    covariation[p] = rows[p].second;
    flipped[p] = -rows[p].second;
  }
  check_finite(drift, "jeulin_yor");
  check_finite(covariation, "jeulin_yor");
  const std::string tag = rho_tag(config) + ".T=" + number(grid.horizon);
  std::vector<VerifyReport> reports;
  reports.push_back(paired_report("jeulin_yor.aggregate." + tag, drift, covariation));
  if (options.negative_controls)
    reports.push_back(paired_report("jeulin_yor.flipped_sign." + tag, drift, flipped, true));
  stamp(reports, start);
  return reports;
}

SpikeSummary spike_statistics(const ModelConfig& config, double horizon, const SuiteOptions& options) {
  const GridSpec grid{horizon, std::max(1, static_cast<int>(std::ceil(horizon)))};
  grid.validate();
  const IntensityEngine engine(config, options.quad);
  const auto per_path = map_paths(config, grid, SeedSpec{options.seed}, options.paths, options.parallelism,
                                  [&](const PathRecord& path) {
                                    std::vector<double> ratios;
                                    int first = 0;
                                    double first_tau = std::numeric_limits<double>::infinity();
                                    for (int j = 1; j <= config.n; ++j) {
                                      if (path.tau_of(j) < first_tau) {
                                        first_tau = path.tau_of(j);
                                        first = j;
                                      }
                                    }
                                    const double tau = std::min(path.tau_of(kBank), path.tau_of(kCounterparty));
                                    if (!(first_tau <= horizon && first_tau < tau)) return ratios;
                                    const PortfolioState before = state_at_default(path, config, first, false);
                                    const PortfolioState after = state_at_default(path, config, first, true);
                                    const SetEval g_before = engine.evaluate(before, SetKind::G);
                                    const SetEval g_after = engine.evaluate(after, SetKind::G);
                                    for (int j : g_after.alive) {
                                      const double lo = engine.gamma_from(g_before, j);
                                      if (!(lo > 0.0)) throw DegenerateHazard("spike: intensity vanishes before a default");
                                      ratios.push_back(engine.gamma_from(g_after, j) / lo);
                                    }
                                    return ratios;
                                  });
  SpikeSummary s;
  s.rho = config.rho_copula;
  for (const auto& r : per_path) {
    if (!r.empty()) ++s.events;
    s.ratios.insert(s.ratios.end(), r.begin(), r.end());
  }
  check_finite(s.ratios, "spike");
  if (s.ratios.empty()) return s;
  std::vector<double> sorted = s.ratios;
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());
  s.median = median_of(sorted);
  // Order-statistic interval of one standard error around the median.
  const double half = 0.5 * std::sqrt(count);
  const auto rank = [&](double r) {
    return sorted[static_cast<std::size_t>(std::clamp(r, 0.0, count - 1.0))];
  };
  s.median_se = 0.5 * (rank(std::ceil(0.5 * count + half)) - rank(std::floor(0.5 * count - half)));
  std::size_t above = 0;
  for (double r : sorted) {
    if (r > 1.0) ++above;
    s.max_abs_log_ratio = std::max(s.max_abs_log_ratio, std::abs(std::log(r)));
  }
  s.fraction_above_one = above / count;
  return s;
}

std::vector<VerifyReport> spike_reports(const std::vector<SpikeSummary>& summaries) {
  std::vector<VerifyReport> reports;
  for (const SpikeSummary& s : summaries) {
    const std::string tag = "rho=" + fixed(s.rho);
    if (s.ratios.empty()) {
      VerifyReport r;
      r.name = "spike.median." + tag;
      r.estimate = std::numeric_limits<double>::quiet_NaN();
      reports.push_back(r);
      continue;
    }
    if (s.rho == 0.0) {
      reports.push_back(tolerance_report("spike.identity." + tag, std::expm1(s.max_abs_log_ratio), 0.0, 1e-9));
      continue;
    }
    VerifyReport r = z_report("spike.median." + tag, s.median, s.median_se, 1.0);
    r.pass = r.z > kZThreshold;
    reports.push_back(r);
    if (s.rho >= 0.4) {
      VerifyReport f;
      f.name = "spike.fraction_above_one." + tag;
      f.estimate = s.fraction_above_one;
      f.target = 0.99;
      f.pass = s.fraction_above_one >= 0.99;
      reports.push_back(f);
    }
  }
  std::vector<const SpikeSummary*> sweep;
  for (const SpikeSummary& s : summaries)
    if (s.rho >= 0.2 - 1e-12 && !s.ratios.empty()) sweep.push_back(&s);
  if (sweep.size() >= 2) {
    std::sort(sweep.begin(), sweep.end(), [](auto a, auto b) { return a->rho < b->rho; });
    VerifyReport m;
    m.name = "spike.monotone_medians.rho=" + fixed(sweep.front()->rho) + "-" + fixed(sweep.back()->rho);
    m.pass = true;
    double smallest_step = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sweep.size(); ++i) {
      const double step = sweep[i]->median - sweep[i - 1]->median;
      smallest_step = std::min(smallest_step, step);
      if (!(step > 0.0)) m.pass = false;
    }
    m.estimate = smallest_step;
    reports.push_back(m);
  }
  return reports;
}

double density_box_probability(const ModelConfig& config, const BoxSpec& box) {
  config.validate();
  const int names = config.name_count();
  if (static_cast<int>(box.lower.size()) != names || static_cast<int>(box.upper.size()) != names)
    throw std::invalid_argument("density_box_probability: one bound per name");
  const double r = config.rho_copula;
  const double load = std::sqrt(r), spread = std::sqrt(1.0 - r);
  using Rule = boost::math::quadrature::gauss<double, 20>;
  constexpr double kReach = 10.0;
  constexpr int kPanels = 40;

  // Integral of a density over [lo, hi] by composite Gauss-Legendre on equal panels.
  const auto composite = [](auto&& f, double lo, double hi) {
    if (!(hi > lo)) return 0.0;
    const double width = (hi - lo) / kPanels;
    double sum = 0.0;
    for (int p = 0; p < kPanels; ++p) sum += Rule::integrate(f, lo + p * width, lo + (p + 1) * width);
    return sum;
  };
  // The density of the default times is integrated in the calibrated coordinates x = h_i(u),
  // where it is the one-factor Gaussian density of the terminal running integrals.
  std::vector<double> x_lo(names), x_hi(names);
  for (int i = 0; i < names; ++i) {
    const int name = index_name(i);
    if (box.lower[i] < 0.0 || !(box.upper[i] >= box.lower[i]))
      throw std::invalid_argument("density_box_probability: invalid box for name " + std::to_string(name));
    x_lo[i] = config.h(name, box.lower[i]);
    x_hi[i] = config.h(name, box.upper[i]);
  }
  const auto factor_integrand = [&](double y) {
    double product = std_normal_density(y);
    for (int i = 0; i < names && product > 0.0; ++i) {
      const double mean = load * y;
      const double lo = std::max(x_lo[i], mean - kReach * spread);
      const double hi = std::min(x_hi[i], mean + kReach * spread);
      product *= composite([&](double x) { return std_normal_density((x - mean) / spread) / spread; }, lo, hi);
    }
    return product;
  };
  return composite(factor_integrand, -kReach, kReach);
}

std::vector<VerifyReport> density_suite(const ModelConfig& config, const SuiteOptions& options) {
  const auto start = Clock::now();
  const int names = config.name_count();
  const double inf = std::numeric_limits<double>::infinity();
  const std::string tag = rho_tag(config);
  std::vector<VerifyReport> reports;

  BoxSpec full{std::vector<double>(names, 0.0), std::vector<double>(names, inf)};
  reports.push_back(tolerance_report("density.normalization." + tag, density_box_probability(config, full), 1.0, 1e-6));
  for (double s : {1.0, 5.0}) {
    BoxSpec tail = full;
    tail.lower[name_index(1)] = s;
    reports.push_back(tolerance_report("density.marginal_survival." + tag + ".name=1.s=" + number(s),
                                       density_box_probability(config, tail), std::exp(-config.hazard(1) * s), 1e-6));
  }

  if (names == 3) {
    const BoxSpec box{{1.0, 2.0, 0.5}, {3.0, 6.0, 9.0}};
    const double quadrature = density_box_probability(config, box);
    // Direct draws of the terminal running integrals at time zero.
    constexpr std::uint64_t kSamples = 1000000;
    std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32), 0x626f78u};
    std::mt19937_64 gen(seq);
    std::normal_distribution<double> normal;
    const double load = std::sqrt(config.rho_copula), spread = std::sqrt(1.0 - config.rho_copula);
    MeanAccumulator hits;
    for (std::uint64_t s = 0; s < kSamples; ++s) {
      const double y = normal(gen);
      bool inside = true;
      for (int i = 0; i < names; ++i) {
        const double tau = config.h_inverse(index_name(i), load * y + spread * normal(gen));
        inside = inside && tau >= box.lower[i] && tau <= box.upper[i];
      }
      hits.add(inside ? 1.0 : 0.0);
    }
    reports.push_back(z_report("density.box_vs_sampling." + tag, quadrature, hits.standard_error(), hits.mean()));
  }
  stamp(reports, start);
  return reports;
}

std::vector<VerifyReport> appendix_suite(const QuadratureConfig& quad, std::uint64_t seed) {
  const auto start = Clock::now();
  std::vector<VerifyReport> reports;

  struct TailCase {
    int d;
    double alpha, epsilon;
    GammaFamily family;
  };
  const TailCase cases[] = {{1, 1.0, 1.0, GammaFamily::StandardNormal},
                            {0, 1.0, 0.5, GammaFamily::StandardNormal},
                            {2, 1.0, 0.5, GammaFamily::StandardNormal},
                            {1, 0.9, 0.5, GammaFamily::NormalTimesQuadratic},
                            {1, 1.0, 0.5, GammaFamily::NormalTimesQuadratic}};
  for (const TailCase& c : cases) {
    const TailBoundReport t = tail_bound_check(c.d, c.alpha, c.epsilon, c.family);
    const std::string tag = to_string(c.family) + ".d=" + std::to_string(c.d) + ".alpha=" + number(c.alpha) +
                            ".eps=" + number(c.epsilon);
    VerifyReport r;
    r.name = "appendix.tail_bound." + tag;
    r.estimate = t.upper_applicable ? t.max_ratio : t.min_ratio;
    r.target = t.upper_applicable ? t.upper_bound : t.lower_bound;
    r.pass = t.upper_holds && t.lower_holds && (t.upper_applicable || t.lower_applicable);
    reports.push_back(r);
    if (c.family == GammaFamily::StandardNormal) {
      VerifyReport m;
      m.name = "appendix.tail_ratio_monotone." + tag;
      m.estimate = t.ratios.back();
      m.target = 1.0 / c.alpha;
      m.pass = t.monotone;
      reports.push_back(m);
    }
  }

  const EquicorrSpec specs[] = {{2, 0.5, 1.0}, {3, 0.3, 0.8}};
  for (const EquicorrSpec& spec : specs) {
    const EnvelopeReport e = affine_envelope_check(spec, quad, seed);
    const std::string tag = "size=" + std::to_string(spec.size) + ".rho=" + fixed(spec.rho) + ".sigma=" + fixed(spec.sigma);
    VerifyReport r;
    r.name = "appendix.affine_envelope." + tag;
    r.estimate = e.worst_excess;
    r.target = 0.0;
    r.pass = e.envelope_holds;
    reports.push_back(r);
    VerifyReport s;
    s.name = "appendix.envelope_stability." + tag;
    s.estimate = e.ratios.empty() ? 0.0 : *std::max_element(e.ratios.begin(), e.ratios.end());
    s.target = 1.1;
    s.pass = e.stable;
    reports.push_back(s);
  }

  const SupBmReport base = sup_bm_exponential_check(1.0, 0.05, 100000, seed);
  VerifyReport q = z_report("appendix.sup_bm_exponential.q=1.t=0.05", base.estimate, base.standard_error, base.exact);
  q.pass = q.pass && base.pass;
  reports.push_back(q);
  const SupBmReport doubled = sup_bm_exponential_check(1.0, 0.05, 200000, seed + 1);
  reports.push_back(tolerance_report("appendix.sup_bm_doubling.q=1.t=0.05", doubled.estimate / base.estimate, 1.0, 0.05));
  stamp(reports, start);
  return reports;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"compensator", "projection", "measure_change", "jeulin_yor",
                                              "spike", "density", "appendix"};
  return names;
}

std::vector<VerifyReport> run_named_suite(const std::string& name, const ModelConfig& base,
                                          const SuiteOptions& options) {
  base.validate();
  const auto with_rho = [&](double rho) {
    ModelConfig c = base;
    c.rho_copula = rho;
    return c;
  };
  const auto controls_at = [&](double rho, double control_rho) {
    SuiteOptions o = options;
    o.negative_controls = options.negative_controls && rho == control_rho;
    return o;
  };
  std::vector<VerifyReport> out;
  const auto append = [&](std::vector<VerifyReport> part) { out.insert(out.end(), part.begin(), part.end()); };
  if (name == "compensator") {
    for (double rho : {0.0, 0.3, 0.6})
      append(compensator_suite(with_rho(rho), GridSpec{5.0, 50}, {1.0, 2.0, 5.0}, {Scope::G, Scope::F},
                               controls_at(rho, 0.6)));
  } else if (name == "projection") {
    append(projection_suite(with_rho(0.6), {2.0, 5.0}, options));
  } else if (name == "measure_change") {
    for (double rho : {0.0, 0.3, 0.6})
      append(measure_change_suite(with_rho(rho), GridSpec{5.0, 50}, {1.0, 2.0, 5.0}, kBank, controls_at(rho, 0.6)));
  } else if (name == "jeulin_yor") {
    append(jeulin_yor_suite(with_rho(0.6), GridSpec{2.0, 80}, options));
  } else if (name == "spike") {
    const auto start = Clock::now();
    std::vector<SpikeSummary> summaries;
    for (double rho : {0.0, 0.2, 0.4, 0.6, 0.8}) summaries.push_back(spike_statistics(with_rho(rho), 10.0, options));
    append(spike_reports(summaries));
    stamp(out, start);
  } else if (name == "density") {
    append(density_suite(with_rho(0.6), options));
  } else if (name == "appendix") {
    append(appendix_suite(options.quad, options.seed));
  } else {
    throw std::invalid_argument("unknown suite '" + name + "'");
  }
  return out;
}

bool all_satisfied(const std::vector<VerifyReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const VerifyReport& r) { return r.satisfied(); });
}

void write_reports_csv(std::ostream& out, const std::vector<VerifyReport>& reports) {
  out << "name,estimate,se,target,z,verdict,negative_control\n";
  char buf[512];
  for (const VerifyReport& r : reports) {
    std::snprintf(buf, sizeof buf, "%s,%.12e,%.12e,%.12e,%.6f,%s,%d\n", r.name.c_str(), r.estimate,
                  r.standard_error, r.target, r.z, r.pass ? "pass" : "fail", r.negative_control ? 1 : 0);
    out << buf;
  }
}

void write_reports_table(std::ostream& out, const std::vector<VerifyReport>& reports) {
  std::size_t width = 4;
  for (const VerifyReport& r : reports) width = std::max(width, r.name.size());
  char buf[1024];
  std::snprintf(buf, sizeof buf, "%-*s %14s %12s %14s %9s %-8s %8s\n", static_cast<int>(width), "test", "estimate", "se",
                "target", "z", "result", "seconds");
  out << buf;
  for (const VerifyReport& r : reports) {
    const char* result = r.negative_control ? (r.pass ? "CTRL-BAD" : "ctrl-ok") : (r.pass ? "pass" : "FAIL");
    std::snprintf(buf, sizeof buf, "%-*s %14.6e %12.4e %14.6e %9.3f %-8s %8.2f\n", static_cast<int>(width),
                  r.name.c_str(), r.estimate, r.standard_error, r.target, r.z, result, r.runtime_seconds);
    out << buf;
  }
}

}  // namespace dgc
