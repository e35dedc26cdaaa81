#pragma once

#include <vector>

#include "tse/core.hpp"
#include "tse/ga.hpp"

namespace tse::calibrate {

struct CalibrationResult {
  core::FDParams fd;
  double rmse = 0.0;  // veh/m over all quartets
  std::vector<double> ga_trace;
};

/// Density a single CTM update predicts for the quartet's k(x, t+dt),
/// clamped to [0, k_j]. Quartet densities are clamped into [0, k_j] before
/// entering the flow function.
double predict_next(const core::FDParams& fd, const core::GridSpec& grid,
                    const core::Quartet& quartet);

/// RMSE between observed and predicted next-step densities over all quartets.
double quartet_rmse(const core::FDParams& fd, const core::GridSpec& grid,
                    const std::vector<core::Quartet>& quartets);

/// GA search for (v_f, k_c) with k_j fixed; gene bounds are the CFL box
/// v_f in (0, dx/dt] and k_c in (0, k_j/2). Fitness is -RMSE over the
/// quartets. The GA is repeated `repeats` times with distinct seeds and the
/// best run wins.
CalibrationResult calibrate_fd(const std::vector<core::Quartet>& quartets,
                               const core::GridSpec& grid, double k_j,
                               const ga::GAConfig& ga_config, int repeats = 5);

}  // namespace tse::calibrate
