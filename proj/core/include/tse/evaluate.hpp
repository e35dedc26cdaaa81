#pragma once

#include <vector>

#include "tse/core.hpp"

namespace tse::evaluate {

/// Boolean grid of cells wholly on the already-swept side of the camera's
/// space-time line.
struct EvalMask {
  std::size_t alpha = 0;
  std::size_t beta = 0;
  std::vector<std::uint8_t> included;  // row-major ix * beta + it

  bool at(std::size_t ix, std::size_t it) const { return included[ix * beta + it]; }
  std::size_t count() const;
};

struct RegressionFit {
  double slope = 0.0;
  double intercept = 0.0;
  double correlation = 0.0;  // Pearson
};

struct ScenarioRow {
  double rmse_ga = 0.0;
  double rmse_baseline = 0.0;
  double mean_density = 0.0;   // mean opposite-lane density, veh/m
  double camera_speed = 0.0;   // mean camera speed, m/s
};

struct EvalReport {
  std::vector<ScenarioRow> rows;
  double ga_mean = 0.0, ga_std = 0.0;
  double baseline_mean = 0.0, baseline_std = 0.0;
  RegressionFit ga_vs_density;
  RegressionFit ga_vs_camera_speed;
  RegressionFit baseline_vs_density;
  RegressionFit baseline_vs_camera_speed;
};

/// Cells the camera has fully swept: every point of the cell's space-time
/// extent lies behind the camera's trajectory line.
EvalMask camera_mask(const core::SpaceTimeDiagram& diagram,
                     const core::GridSpec& grid);

/// sqrt(mean over masked cells of (truth - estimate)^2).
double masked_rmse(const core::DensityMatrix& truth,
                   const core::DensityMatrix& estimate, const EvalMask& mask);

/// Huber-loss linear fit (delta = 1.345 * robust scale, IRLS to 1e-8) plus
/// the Pearson correlation of x and y.
RegressionFit trend_regression(const std::vector<double>& x,
                               const std::vector<double>& y);

/// Per-scenario input to batch_report.
struct ScenarioEval {
  core::DensityMatrix truth;
  core::DensityMatrix estimated;
  core::DensityMatrix baseline;
  EvalMask mask;
  double mean_density = 0.0;
  double camera_speed = 0.0;
};

EvalReport batch_report(const std::vector<ScenarioEval>& scenarios);

}  // namespace tse::evaluate
