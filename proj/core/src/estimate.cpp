#include "tse/estimate.hpp"

#include <algorithm>
#include <cmath>

namespace tse::estimate {

EstimationResult estimate_density(const core::DensityMatrix& partial,
                                  const core::FDParams& fd,
                                  const ga::GAConfig& ga_config, int repeats) {
  const core::GridSpec& grid = partial.grid();
  fd.require_cfl(grid);
  if (repeats < 1) throw ConfigError("estimate_density: repeats must be >= 1");

  struct Observed {
    std::size_t ix, it;
    double k;
  };
  std::vector<Observed> observed;
  for (std::size_t ix = 0; ix < grid.alpha(); ++ix) {
    for (std::size_t it = 0; it < grid.beta(); ++it) {
      if (partial.observed(ix, it)) observed.push_back({ix, it, partial.at(ix, it)});
    }
  }
  if (observed.empty()) throw ConfigError("estimate_density: no observed cells");

  ga::GAConfig config = ga_config;
  config.gene_bounds.assign(grid.alpha() + 2 * grid.beta(), {0.0, fd.k_j()});

  auto fitness = [&](const ga::Genome& genome) {
    const core::BoundaryVector bv = core::BoundaryVector::unflatten(genome, grid);
    const core::DensityMatrix rollout = core::ctm_run(fd, grid, bv);
    double sum_sq = 0.0;
    for (const auto& o : observed) {
      const double e = o.k - rollout.at(o.ix, o.it);
      sum_sq += e * e;
    }
    return -std::sqrt(sum_sq / static_cast<double>(observed.size()));
  };

  ga::GAResult best;
  bool first = true;
  for (int rep = 0; rep < repeats; ++rep) {
    config.rng_seed = ga_config.rng_seed + static_cast<std::uint64_t>(rep);
    ga::GAResult r = ga::run(config, fitness);
    if (first || r.best_fitness > best.best_fitness) {
      best = std::move(r);
      first = false;
    }
  }

  core::BoundaryVector boundary =
      core::BoundaryVector::unflatten(best.best_genome, grid);
  core::DensityMatrix completed = core::ctm_run(fd, grid, boundary);
  return EstimationResult{std::move(boundary), std::move(completed),
                          best.best_fitness, std::move(best.fitness_trace)};
}

core::BoundaryVector extract_true_boundary(const core::DensityMatrix& truth,
                                           double k_j) {
  const core::GridSpec& grid = truth.grid();
  core::BoundaryVector bv;
  for (std::size_t i = 0; i < grid.alpha(); ++i) {
    bv.init.push_back(std::clamp(truth.at(i, 0), 0.0, k_j));
  }
  for (std::size_t j = 0; j < grid.beta(); ++j) {
    bv.inflow.push_back(std::clamp(truth.at(0, j), 0.0, k_j));
    bv.outflow.push_back(std::clamp(truth.at(grid.alpha() - 1, j), 0.0, k_j));
  }
  return bv;
}

core::DensityMatrix baseline_known(const core::FDParams& fd_true,
                                   const core::GridSpec& grid,
                                   const core::BoundaryVector& bv_true) {
  return core::ctm_run(fd_true, grid, bv_true);
}

}  // namespace tse::estimate
