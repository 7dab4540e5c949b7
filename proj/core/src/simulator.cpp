#include "dgc/simulator.hpp"

#include "dgc/errors.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace dgc {
namespace {

std::mt19937_64 path_generator(const SeedSpec& seed, std::uint64_t path_index) {
  const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
  const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed.master_seed), hi(seed.master_seed), lo(path_index), hi(path_index), 0x64676370u};
  return std::mt19937_64(seq);
}

// Variance clock of the running integrals: v(t) = 1 - alpha(t)^2.
double variance_clock(const ModelConfig& config, double t) { return -std::expm1(-config.kappa * t); }

}  // namespace

void GridSpec::validate() const {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("GridSpec: horizon must be > 0");
  if (steps < 1) throw std::invalid_argument("GridSpec: steps must be >= 1");
}

int GridSpec::step_containing(double t) const {
  int k = static_cast<int>(std::ceil(t / horizon * steps)) - 1;
  k = std::clamp(k, 0, steps - 1);
  while (k > 0 && time(k) >= t) --k;
  while (k < steps - 1 && time(k + 1) < t) ++k;
  return k;
}

PathRecord simulate_path(const ModelConfig& config, const GridSpec& grid, const SeedSpec& seed,
                         std::uint64_t path_index) {
  const int names = config.name_count();
  const int steps = grid.steps;
  const double r = config.rho_copula;
  const double common_load = std::sqrt(r);
  const double idio_load = std::sqrt(1.0 - r);

  PathRecord p;
  p.path_index = path_index;
  p.names = names;
  p.steps = steps;
  p.times.resize(steps + 1);
  for (int k = 0; k <= steps; ++k) p.times[k] = grid.time(k);
  p.m.assign(static_cast<std::size_t>(steps + 1) * names, 0.0);
  p.b.assign(static_cast<std::size_t>(steps + 1) * names, 0.0);

  // Factor-level running integrals: column 0 is the common factor, column 1 + i the idiosyncratic ones.
  const int factors = names + 1;
  std::vector<double> factor_m(static_cast<std::size_t>(steps + 1) * factors, 0.0);

  std::mt19937_64 gen = path_generator(seed, path_index);
  std::normal_distribution<double> normal;
  std::vector<double> dw(factors), dm(factors);
  for (int k = 0; k < steps; ++k) {
    const double t0 = p.times[k], t1 = p.times[k + 1];
    const double dt = t1 - t0;
    const double c = config.vol_integral(t0, t1);
    const double v = config.vol_sq_integral(t0, t1);
    const double sd_w = std::sqrt(dt);
    const double load = c / sd_w;
    const double resid_sd = std::sqrt(std::max(0.0, v - c * c / dt));
    for (int f = 0; f < factors; ++f) {
      const double u1 = normal(gen);
      const double u2 = normal(gen);
      dw[f] = sd_w * u1;
      dm[f] = load * u1 + resid_sd * u2;
      factor_m[static_cast<std::size_t>(k + 1) * factors + f] = factor_m[static_cast<std::size_t>(k) * factors + f] + dm[f];
    }
    for (int i = 0; i < names; ++i) {
      const std::size_t at = static_cast<std::size_t>(k) * names + i;
      p.b[at + names] = p.b[at] + common_load * dw[0] + idio_load * dw[1 + i];
      p.m[at + names] = p.m[at] + common_load * dm[0] + idio_load * dm[1 + i];
    }
  }

  const double tail_sd = config.alpha(grid.horizon);
  const double common_tail = tail_sd * normal(gen);
  p.residual_T.resize(names);
  p.m_inf.resize(names);
  p.tau.resize(names);
  for (int i = 0; i < names; ++i) {
    p.residual_T[i] = common_load * common_tail + idio_load * tail_sd * normal(gen);
    p.m_inf[i] = p.m[static_cast<std::size_t>(steps) * names + i] + p.residual_T[i];
    p.tau[i] = config.h_inverse(index_name(i), p.m_inf[i]);
  }

  p.m_at_default.assign(names, {});
  for (int i = 0; i < names; ++i) {
    const double tau = p.tau[i];
    if (!(tau <= grid.horizon)) continue;
    const int k = grid.step_containing(tau);
    const double v0 = variance_clock(config, p.times[k]);
    const double v1 = variance_clock(config, p.times[k + 1]);
    const double vt = variance_clock(config, tau);
    const double span = v1 - v0;
    const double theta = span > 0.0 ? std::clamp((vt - v0) / span, 0.0, 1.0) : 1.0;
    const double bridge_sd = std::sqrt(std::max(0.0, theta * (1.0 - theta) * span));
    std::vector<double> f_tau(factors);
    for (int f = 0; f < factors; ++f) {
      const double a = factor_m[static_cast<std::size_t>(k) * factors + f];
      const double b = factor_m[static_cast<std::size_t>(k + 1) * factors + f];
      f_tau[f] = a + theta * (b - a) + bridge_sd * normal(gen);
    }
    auto& out = p.m_at_default[i];
    out.resize(names);
    for (int j = 0; j < names; ++j) out[j] = common_load * f_tau[0] + idio_load * f_tau[1 + j];
  }
  return p;
}

PortfolioState state_at_grid(const PathRecord& path, const ModelConfig& config, int k) {
  PortfolioState s;
  s.t = path.times[k];
  s.m.assign(path.m.begin() + static_cast<std::ptrdiff_t>(k) * path.names,
             path.m.begin() + static_cast<std::ptrdiff_t>(k + 1) * path.names);
  for (int i = 0; i < path.names; ++i) {
    if (path.tau[i] <= s.t) s.defaults.push_back({index_name(i), path.tau[i], path.m_inf[i] - s.m[i]});
  }
  (void)config;
  return s;
}

PortfolioState state_at_default(const PathRecord& path, const ModelConfig& config, int name, bool after) {
  const int idx = name_index(name);
  const auto& m_tau = path.m_at_default.at(idx);
  if (m_tau.empty()) throw std::invalid_argument("state_at_default: name " + std::to_string(name) + " does not default on the grid");
  PortfolioState s;
  s.t = path.tau[idx];
  s.m = m_tau;
  for (int i = 0; i < path.names; ++i) {
    const bool include = (i == idx) ? after : path.tau[i] < s.t;
    if (include) s.defaults.push_back({index_name(i), path.tau[i], path.m_inf[i] - s.m[i]});
  }
  (void)config;
  return s;
}

std::vector<DefaultEvent> defaults_in_step(const PathRecord& path, const GridSpec& grid, int k) {
  std::vector<DefaultEvent> events;
  const double t0 = path.times[k], t1 = path.times[k + 1];
  for (int i = 0; i < path.names; ++i)
    if (path.tau[i] > t0 && path.tau[i] <= t1) events.push_back({path.tau[i], index_name(i)});
  std::sort(events.begin(), events.end(), [](const DefaultEvent& a, const DefaultEvent& b) { return a.tau < b.tau; });
  (void)grid;
  return events;
}

namespace {

// Point values of the reduced quantities at one state.
struct ReducedPoint {
  std::vector<double> gamma_tilde, gamma_bar, beta_tilde, beta_bar;
  double gap = 0.0;  // sum over reference names of gamma_tilde - gamma_bar
};

ReducedPoint reduced_point(const IntensityEngine& engine, const PortfolioState& state,
                           const SetEval& tilde, const SetEval& bar) {
  const ModelConfig& config = engine.config();
  const int names = config.name_count();
  ReducedPoint p;
  p.gamma_tilde.assign(names, 0.0);
  p.gamma_bar.assign(names, 0.0);
  p.beta_tilde.resize(names);
  p.beta_bar.resize(names);
  for (int name = kBank; name <= config.n; ++name) {
    const int i = name_index(name);
    if (name >= 1) {
      p.gamma_tilde[i] = engine.gamma_from(tilde, name);
      p.gamma_bar[i] = engine.gamma_from(bar, name);
      p.gap += p.gamma_tilde[i] - p.gamma_bar[i];
    }
    p.beta_tilde[i] = engine.beta_from(state, tilde, name);
    p.beta_bar[i] = engine.beta_from(state, bar, name);
  }
  return p;
}

ReducedPoint reduced_point(const IntensityEngine& engine, const PortfolioState& state) {
  return reduced_point(engine, state, engine.evaluate(state, SetKind::FTilde),
                       engine.evaluate(state, SetKind::FBar));
}

}  // namespace

ReducedWalk reduced_walk(const PathRecord& path, const IntensityEngine& engine, const GridSpec& grid) {
  const ModelConfig& config = engine.config();
  const int names = config.name_count();
  const std::size_t cells = static_cast<std::size_t>(grid.steps + 1) * names;
  ReducedWalk out;
  out.names = names;
  out.weight.assign(grid.steps + 1, 1.0);
  out.gamma_tilde.assign(cells, 0.0);
  out.gamma_bar.assign(cells, 0.0);
  out.beta_tilde.assign(cells, 0.0);
  out.beta_bar.assign(cells, 0.0);
  out.drift_gap_left.assign(cells, 0.0);
  out.covariation.assign(cells, 0.0);
  out.covariation_rate_integral.assign(cells, 0.0);

  std::vector<double> acc_gt(names, 0.0), acc_gb(names, 0.0), acc_bt(names, 0.0), acc_bb(names, 0.0);
  std::vector<double> acc_gap(names, 0.0), acc_cov(names, 0.0), acc_rate(names, 0.0);
  auto add_segment = [&](const ReducedPoint& left, const ReducedPoint& right, double length) {
    for (int i = 0; i < names; ++i) {
      acc_gt[i] += 0.5 * (left.gamma_tilde[i] + right.gamma_tilde[i]) * length;
      acc_gb[i] += 0.5 * (left.gamma_bar[i] + right.gamma_bar[i]) * length;
      acc_bt[i] += 0.5 * (left.beta_tilde[i] + right.beta_tilde[i]) * length;
      acc_bb[i] += 0.5 * (left.beta_bar[i] + right.beta_bar[i]) * length;
    }
  };

  PortfolioState state = state_at_grid(path, config, 0);
  SetEval tilde = engine.evaluate(state, SetKind::FTilde);
  SetEval bar = engine.evaluate(state, SetKind::FBar);
  ReducedPoint left = reduced_point(engine, state, tilde, bar);
  double log_weight = 0.0;
  for (int k = 0; k < grid.steps; ++k) {
    const double t0 = path.times[k], t1 = path.times[k + 1];
    const std::vector<double> w = engine.nu_weights(tilde, bar);
    const double dt = t1 - t0;
    double dnu = 0.0;
    for (int name = kBank; name <= config.n; ++name) {
      const int i = name_index(name);
      if (w[i] == 0.0) continue;
      dnu += w[i] * (path.b_at(k + 1, name) - path.b_at(k, name) - left.beta_bar[i] * dt);
    }
    dnu *= bar.vol / bar.alpha;
    log_weight += dnu - 0.5 * engine.nu_variance(t0, dt, w);
    for (int name = kBank; name <= config.n; ++name) {
      const int i = name_index(name);
      acc_gap[i] += (left.beta_tilde[i] - left.beta_bar[i]) * dt;
      acc_cov[i] += (path.b_at(k + 1, name) - path.b_at(k, name) - left.beta_bar[i] * dt) * dnu;
      acc_rate[i] += engine.nu_covariation_rate(t0, name, w) * dt;
    }

    double left_time = t0;
    for (const DefaultEvent& e : defaults_in_step(path, grid, k)) {
      const PortfolioState before = state_at_default(path, config, e.name, false);
      const SetEval tb = engine.evaluate(before, SetKind::FTilde);
      const SetEval bb = engine.evaluate(before, SetKind::FBar);
      const ReducedPoint right = reduced_point(engine, before, tb, bb);
      add_segment(left, right, e.tau - left_time);
      log_weight -= 0.5 * (left.gap + right.gap) * (e.tau - left_time);
      if (e.name >= 1) {
        const double g_tilde = right.gamma_tilde[name_index(e.name)];
        const double g_bar = right.gamma_bar[name_index(e.name)];
        if (!(g_bar > 0.0)) throw DegenerateHazard("reduced_walk: reduced intensity vanishes at a default");
        log_weight += std::log(g_tilde / g_bar);
      }
      left = reduced_point(engine, state_at_default(path, config, e.name, true));
      left_time = e.tau;
    }
    state = state_at_grid(path, config, k + 1);
    tilde = engine.evaluate(state, SetKind::FTilde);
    bar = engine.evaluate(state, SetKind::FBar);
    const ReducedPoint right = reduced_point(engine, state, tilde, bar);
    add_segment(left, right, t1 - left_time);
    log_weight -= 0.5 * (left.gap + right.gap) * (t1 - left_time);
    left = right;

    out.weight[k + 1] = std::exp(log_weight);
    const std::size_t row = static_cast<std::size_t>(k + 1) * names;
    std::copy(acc_gt.begin(), acc_gt.end(), out.gamma_tilde.begin() + row);
    std::copy(acc_gb.begin(), acc_gb.end(), out.gamma_bar.begin() + row);
    std::copy(acc_bt.begin(), acc_bt.end(), out.beta_tilde.begin() + row);
    std::copy(acc_bb.begin(), acc_bb.end(), out.beta_bar.begin() + row);
    std::copy(acc_gap.begin(), acc_gap.end(), out.drift_gap_left.begin() + row);
    std::copy(acc_cov.begin(), acc_cov.end(), out.covariation.begin() + row);
    std::copy(acc_rate.begin(), acc_rate.end(), out.covariation_rate_integral.begin() + row);
  }
  return out;
}

std::vector<double> doleans_weight(const PathRecord& path, const IntensityEngine& engine,
                                   const GridSpec& grid) {
  return reduced_walk(path, engine, grid).weight;
}

std::vector<PathRecord> simulate_batch(const ModelConfig& config, const GridSpec& grid,
                                       const SeedSpec& seed, std::uint64_t count, int parallelism) {
  if (count < 1) throw std::invalid_argument("simulate_batch: count must be >= 1");
  return map_paths(config, grid, seed, count, parallelism, [](const PathRecord& p) { return p; });
}

void write_path_dump(std::ostream& out, const std::vector<PathRecord>& paths) {
  out << "path_index,name,tau,m_T,weight_T\n";
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (const auto& p : paths) {
    const double w = p.weight.empty() ? 1.0 : p.weight.back();
    for (int i = 0; i < p.names; ++i) {
      out << p.path_index << ',' << index_name(i) << ',' << p.tau[i] << ','
          << p.m[static_cast<std::size_t>(p.steps) * p.names + i] << ',' << w << '\n';
    }
  }
  out.flags(flags);
  out.precision(precision);
}

int default_parallelism() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace dgc
