#pragma once

#include "dgc/intensity.hpp"
#include "dgc/model.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <thread>
#include <vector>

namespace dgc {

struct GridSpec {
  double horizon = 10.0;
  int steps = 200;

  void validate() const;
  double dt() const { return horizon / steps; }
  double time(int k) const { return k == steps ? horizon : horizon * k / steps; }
  // Index of the grid step (t_k, t_{k+1}] containing t, for 0 < t <= horizon.
  int step_containing(double t) const;
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
};

// One scenario. Matrices are row-major with one row per grid time and one column per name.
struct PathRecord {
  std::uint64_t path_index = 0;
  int names = 0;
  int steps = 0;
  std::vector<double> times;
  std::vector<double> m;           // running integrals m^i_t
  std::vector<double> b;           // Brownian motions B^i_t
  std::vector<double> residual_T;  // residual draws for [T, infinity)
  std::vector<double> m_inf;       // m^i_T + residual_T^i
  std::vector<double> tau;         // default times, possibly beyond the horizon
  // Running integrals of every name at tau_i, sampled from the Brownian bridge; empty if tau_i > T.
  std::vector<std::vector<double>> m_at_default;
  std::vector<double> weight;      // Doleans weight per grid time, filled by doleans_weight

  double m_at(int k, int name) const { return m[static_cast<std::size_t>(k) * names + name_index(name)]; }
  double b_at(int k, int name) const { return b[static_cast<std::size_t>(k) * names + name_index(name)]; }
  double tau_of(int name) const { return tau[name_index(name)]; }
};

PathRecord simulate_path(const ModelConfig& config, const GridSpec& grid, const SeedSpec& seed,
                         std::uint64_t path_index);

// State at grid time k with every default at or before t_k; residuals are m_inf - m_t.
PortfolioState state_at_grid(const PathRecord& path, const ModelConfig& config, int k);
// State at the default time of name, just before (name alive) or just after.
PortfolioState state_at_default(const PathRecord& path, const ModelConfig& config, int name, bool after);

struct DefaultEvent {
  double tau;
  int name;
};
// Defaults with t_k < tau <= t_{k+1}, in time order.
std::vector<DefaultEvent> defaults_in_step(const PathRecord& path, const GridSpec& grid, int k);

// Quantities of the reduced filtration along one path, cumulative at each grid time.
// Matrices are row-major with one row per grid time and one column per name.
struct ReducedWalk {
  int names = 0;
  std::vector<double> weight;          // Doleans weight
  std::vector<double> gamma_tilde;     // int gamma_tilde^j ds, reference names only
  std::vector<double> gamma_bar;       // int gamma_bar^j ds, reference names only
  std::vector<double> beta_tilde;      // int beta_tilde^k ds
  std::vector<double> beta_bar;        // int beta_bar^k ds
  std::vector<double> drift_gap_left;  // int (beta_tilde^k - beta_bar^k) ds, left-point rule on the grid
  std::vector<double> covariation;     // realized sum of (dB^k - beta_bar^k dt) dnu
  std::vector<double> covariation_rate_integral;  // int d<B^k, nu>/ds ds, left-point rule

  double at(const std::vector<double>& field, int k, int name) const {
    return field[static_cast<std::size_t>(k) * names + name_index(name)];
  }
};

// Walks the grid once. Time integrals use the trapezoid rule split at every default, with
// the state just before and just after each default; nu increments use the weights and drifts
// at the start of each step. The Doleans weight has continuous part exp(dnu - d<nu>/2), jump factor
// gamma_tilde / gamma_bar at reference defaults and compensator exp(-int (tilde - bar)).
ReducedWalk reduced_walk(const PathRecord& path, const IntensityEngine& engine, const GridSpec& grid);

std::vector<double> doleans_weight(const PathRecord& path, const IntensityEngine& engine,
                                   const GridSpec& grid);

// Runs fn(path) for path indices 0..count-1 on up to parallelism threads and returns the
// results in path order, so the output does not depend on the thread count.
template <typename Fn>
auto map_paths(const ModelConfig& config, const GridSpec& grid, const SeedSpec& seed,
               std::uint64_t count, int parallelism, Fn&& fn)
    -> std::vector<decltype(fn(std::declval<const PathRecord&>()))> {
  using Result = decltype(fn(std::declval<const PathRecord&>()));
  std::vector<Result> results(count);
  std::atomic<std::uint64_t> next{0};
  constexpr std::uint64_t chunk = 64;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      const std::uint64_t end = std::min(count, begin + chunk);
      for (std::uint64_t i = begin; i < end; ++i) results[i] = fn(simulate_path(config, grid, seed, i));
    }
  };
  const int threads = std::max(1, parallelism);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return results;
}

std::vector<PathRecord> simulate_batch(const ModelConfig& config, const GridSpec& grid,
                                       const SeedSpec& seed, std::uint64_t count, int parallelism);

// Columnar dump: header "path_index,name,tau,m_T,weight_T", one row per path and name.
void write_path_dump(std::ostream& out, const std::vector<PathRecord>& paths);

// Number of threads used when the caller does not choose.
int default_parallelism();

}  // namespace dgc
