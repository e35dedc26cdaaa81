#pragma once

#include <string>
#include <vector>

#include "tse/calibrate.hpp"
#include "tse/estimate.hpp"
#include "tse/ga.hpp"

namespace tse::gridsearch {

/// One hyperparameter axis value; mutation probabilities come in pairs.
struct AxisValue {
  double a = 0.0;
  double b = 0.0;
  bool is_pair = false;

  static AxisValue scalar(double v) { return {v, 0.0, false}; }
  static AxisValue pair(double lo, double hi) { return {lo, hi, true}; }
};

/// Recognized axis names: "generations", "k_tournament", "population",
/// "crossover_pairs", "mutation" (pair values).
struct Axis {
  std::string name;
  std::vector<AxisValue> values;
};

struct SearchSpec {
  std::vector<Axis> axes;
  ga::GAConfig base;
  int repetitions = 1;
  std::uint64_t rng_seed = 0;
  std::size_t max_points = 4096;
  // Ties crossover_pairs to population/2 wherever a population axis applies.
  bool crossover_half_population = false;
};

struct SearchRow {
  std::vector<AxisValue> point;  // one value per axis, in axis order
  double fitness = 0.0;
};

struct SearchTable {
  std::vector<std::string> axis_names;
  std::vector<SearchRow> rows;  // sorted by fitness descending
};

/// FD-calibration search: each lattice point runs calibrate_fd on the
/// quartets and records the best fitness (-RMSE).
SearchTable search_fd(const std::vector<core::Quartet>& quartets,
                      const core::GridSpec& grid, double k_j,
                      const SearchSpec& spec);

/// Boundary-estimation search: each lattice point runs estimate_density on
/// every diagram and records the mean best fitness across diagrams.
SearchTable search_boundary(const std::vector<core::DensityMatrix>& partials,
                            const core::FDParams& fd, const SearchSpec& spec);

/// The published FD-calibration grid: generations x k-tournament x mutation,
/// 60 points at fixed population 56 / crossover 20.
SearchSpec fd_search_spec(std::uint64_t seed);

/// Boundary search phase 1: k-tournament x mutation at fixed
/// (generations 60, population 500), 25 points.
SearchSpec boundary_phase1_spec(std::uint64_t seed);

/// Boundary search phase 2: population x generations at fixed
/// (mutation (0.9, 0.1), k 10, crossover = population/2), 25 points.
SearchSpec boundary_phase2_spec(std::uint64_t seed);

}  // namespace tse::gridsearch
