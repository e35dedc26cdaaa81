#include "tse/calibrate.hpp"

#include <algorithm>
#include <cmath>

namespace tse::calibrate {

double predict_next(const core::FDParams& fd, const core::GridSpec& grid,
                    const core::Quartet& quartet) {
  const double k_j = fd.k_j();
  const double up = std::clamp(quartet.k_up, 0.0, k_j);
  const double mid = std::clamp(quartet.k_mid, 0.0, k_j);
  const double down = std::clamp(quartet.k_down, 0.0, k_j);
  const double q_in = core::flow(fd, up, mid);
  const double q_out = core::flow(fd, mid, down);
  return std::clamp(mid + grid.step_ratio() * (q_in - q_out), 0.0, k_j);
}

double quartet_rmse(const core::FDParams& fd, const core::GridSpec& grid,
                    const std::vector<core::Quartet>& quartets) {
  if (quartets.empty()) throw ConfigError("calibrate: no quartets");
  double sum_sq = 0.0;
  for (const auto& q : quartets) {
    const double e = q.k_next - predict_next(fd, grid, q);
    sum_sq += e * e;
  }
  return std::sqrt(sum_sq / static_cast<double>(quartets.size()));
}

CalibrationResult calibrate_fd(const std::vector<core::Quartet>& quartets,
                               const core::GridSpec& grid, double k_j,
                               const ga::GAConfig& ga_config, int repeats) {
  if (quartets.empty()) throw ConfigError("calibrate_fd: empty quartet list");
  if (k_j <= 0.0) throw ConfigError("calibrate_fd: k_j must be positive");
  if (repeats < 1) throw ConfigError("calibrate_fd: repeats must be >= 1");

  constexpr double kEps = 1e-9;
  ga::GAConfig config = ga_config;
  config.gene_bounds = {{kEps, grid.max_speed()},           // v_f, CFL bound
                        {kEps, k_j / 2.0 * (1.0 - 1e-12)}}; // k_c < k_j/2

  auto fitness = [&](const ga::Genome& genome) {
    const core::FDParams fd(genome[0], genome[1], k_j);
    return -quartet_rmse(fd, grid, quartets);
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

  core::FDParams fd(best.best_genome[0], best.best_genome[1], k_j);
  return CalibrationResult{fd, -best.best_fitness, std::move(best.fitness_trace)};
}

}  // namespace tse::calibrate
