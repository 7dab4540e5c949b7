#include "dgc/equicorr.hpp"
#include "dgc/intensity.hpp"
#include "dgc/simulator.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

void equicorr_kernel(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const dgc::EquicorrSpec spec{d, 0.5, 0.9};
  const dgc::QuadratureConfig quad{static_cast<int>(state.range(1)), 8.0, 1e-9};
  std::vector<double> z(d);
  for (int j = 0; j < d; ++j) z[j] = -1.0 + 0.7 * j;
  double log_survival = 0.0, mean = 0.0;
  std::vector<double> hazard(d);
  for (auto _ : state) {
    dgc::equicorr_integrate(z, spec, quad, log_survival, mean, hazard);
    benchmark::DoNotOptimize(log_survival);
  }
}
BENCHMARK(equicorr_kernel)->Args({3, 32})->Args({3, 128})->Args({10, 32});

dgc::ModelConfig config() {
  dgc::ModelConfig c = dgc::ModelConfig::defaults();
  c.rho_copula = 0.6;
  return c;
}

void path_simulation(benchmark::State& state) {
  const auto c = config();
  const dgc::GridSpec grid{5.0, 50};
  std::uint64_t index = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dgc::simulate_path(c, grid, {1}, index++));
}
BENCHMARK(path_simulation);

void reduced_walk(benchmark::State& state) {
  const auto c = config();
  const dgc::IntensityEngine engine(c, {32, 8.0, 1e-9});
  const dgc::GridSpec grid{5.0, 50};
  std::uint64_t index = 0;
  for (auto _ : state) {
    const auto path = dgc::simulate_path(c, grid, {1}, index++);
    benchmark::DoNotOptimize(dgc::reduced_walk(path, engine, grid));
  }
}
BENCHMARK(reduced_walk);

void intensity_report(benchmark::State& state) {
  const auto c = config();
  const dgc::IntensityEngine engine(c);
  auto s = dgc::PortfolioState::initial(c);
  s.t = 2.0;
  s.m = {0.2, -0.1, 0.3};
  s.add_default(c, 1, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(engine.report(s));
}
BENCHMARK(intensity_report);

}  // namespace

BENCHMARK_MAIN();
