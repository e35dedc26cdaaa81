#pragma once

#include <vector>

#include "tse/core.hpp"
#include "tse/ga.hpp"

namespace tse::estimate {

struct EstimationResult {
  core::BoundaryVector boundary;
  core::DensityMatrix completed;  // ctm_run(fd, grid, boundary)
  double fitness = 0.0;           // -RMSE over the observed cells
  std::vector<double> ga_trace;
};

/// GA search over the flattened boundary vector (alpha init genes, beta
/// inflow genes, beta outflow genes, each in [0, k_j]); fitness is -RMSE
/// between the partial matrix's observed cells and the CTM rollout. Runs
/// the GA `repeats` times with distinct seeds, keeps the best.
EstimationResult estimate_density(const core::DensityMatrix& partial,
                                  const core::FDParams& fd,
                                  const ga::GAConfig& ga_config,
                                  int repeats = 5);

/// Boundary vector read off a fully observed ground-truth matrix: column 0
/// as init, edge-cell densities as per-step inflow/outflow.
core::BoundaryVector extract_true_boundary(const core::DensityMatrix& truth,
                                           double k_j);

/// CTM rollout under known FD and boundary values, the comparison baseline.
core::DensityMatrix baseline_known(const core::FDParams& fd_true,
                                   const core::GridSpec& grid,
                                   const core::BoundaryVector& bv_true);

}  // namespace tse::estimate
