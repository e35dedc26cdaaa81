#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tse/core.hpp"

namespace {

tse::core::BoundaryVector random_boundary(const tse::core::GridSpec& grid,
                                          double k_j, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uk(0.0, k_j);
  tse::core::BoundaryVector bv;
  for (std::size_t i = 0; i < grid.alpha(); ++i) bv.init.push_back(uk(rng));
  for (std::size_t j = 0; j < grid.beta(); ++j) {
    bv.inflow.push_back(uk(rng));
    bv.outflow.push_back(uk(rng));
  }
  return bv;
}

void BM_ctm_run(benchmark::State& state) {
  const tse::core::GridSpec grid(100.0, 16.0, 20.0, 2.0);
  const double k_j = 1.0 / 6.5;
  const tse::core::FDParams fd(9.2, 0.055, k_j);
  const auto bv = random_boundary(grid, k_j, 7);
  for (auto _ : state) {
    auto m = tse::core::ctm_run(fd, grid, bv);
    benchmark::DoNotOptimize(m);
  }
}
BENCHMARK(BM_ctm_run);

void BM_ctm_run_large(benchmark::State& state) {
  const double cells = static_cast<double>(state.range(0));
  const tse::core::GridSpec grid(20.0 * cells, 2.0 * cells, 20.0, 2.0);
  const double k_j = 1.0 / 6.5;
  const tse::core::FDParams fd(9.2, 0.055, k_j);
  const auto bv = random_boundary(grid, k_j, 7);
  for (auto _ : state) {
    auto m = tse::core::ctm_run(fd, grid, bv);
    benchmark::DoNotOptimize(m);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ctm_run_large)->RangeMultiplier(4)->Range(8, 512)->Complexity();

}  // namespace

BENCHMARK_MAIN();
