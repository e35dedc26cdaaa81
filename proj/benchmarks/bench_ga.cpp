#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "tse/estimate.hpp"
#include "tse/ga.hpp"

namespace {

void BM_ga_sphere(benchmark::State& state) {
  tse::ga::GAConfig cfg;
  cfg.population_size = static_cast<int>(state.range(0));
  cfg.generations = 100;
  cfg.gene_bounds.assign(21, {-5.0, 5.0});
  cfg.rng_seed = 11;
  const auto sphere = [](const tse::ga::Genome& g) {
    double s = 0.0;
    for (double v : g) s += v * v;
    return -s;
  };
  for (auto _ : state) {
    auto r = tse::ga::run(cfg, sphere);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_ga_sphere)->Arg(56)->Arg(200)->Arg(500);

void BM_estimate_density(benchmark::State& state) {
  const tse::core::GridSpec grid(100.0, 16.0, 20.0, 2.0);
  const double k_j = 1.0 / 6.5;
  const tse::core::FDParams fd(9.2, 0.055, k_j);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uk(0.0, 0.5 * k_j);
  tse::core::BoundaryVector bv;
  for (std::size_t i = 0; i < grid.alpha(); ++i) bv.init.push_back(uk(rng));
  for (std::size_t j = 0; j < grid.beta(); ++j) {
    bv.inflow.push_back(uk(rng));
    bv.outflow.push_back(uk(rng));
  }
  const auto full = tse::core::ctm_run(fd, grid, bv);
  tse::core::DensityMatrix partial(grid);
  for (std::size_t ix = 0; ix < grid.alpha(); ++ix)
    for (std::size_t it = 0; it < grid.beta(); ++it)
      if ((ix + it) % 2 == 0) partial.set(ix, it, full.at(ix, it));
  tse::ga::GAConfig cfg;
  cfg.population_size = static_cast<int>(state.range(0));
  cfg.generations = 60;
  cfg.k_tournament = 10;
  cfg.crossover_pairs = 50;
  cfg.p_low_fitness = 0.9;
  cfg.p_high_fitness = 0.1;
  cfg.rng_seed = 17;
  for (auto _ : state) {
    auto r = tse::estimate::estimate_density(partial, fd, cfg, 1);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_estimate_density)->Arg(100)->Arg(500);

}  // namespace

BENCHMARK_MAIN();
