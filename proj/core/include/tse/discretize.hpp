#pragma once

#include <vector>

#include "tse/core.hpp"

namespace tse::discretize {

/// Per-cell Edie totals: vehicle-seconds and vehicle-meters accumulated in
/// the cell's space-time region.
struct EdieCell {
  double time = 0.0;      // seconds
  double distance = 0.0;  // meters
};

/// Edie accumulation over every cell of the grid, row-major (ix * beta + it).
/// Residence intervals come from linear interpolation between samples; a
/// point exactly on a cell edge belongs to the higher-index cell.
std::vector<EdieCell> edie_cells(const core::SpaceTimeDiagram& diagram,
                                 const core::GridSpec& grid);

/// Keeps only the trajectory portions inside the camera's field of view;
/// boundary samples are interpolated, empty trajectories dropped.
core::SpaceTimeDiagram restrict_to_fov(const core::SpaceTimeDiagram& diagram);

/// Edie density aggregation, k(A) = sum_j t_j(A) / (dx*dt). With `masked`
/// set, densities use only FOV-visible trajectory portions and a cell is
/// observed exactly when the FOV sweep intersects its space-time region;
/// otherwise every cell is observed (ground truth).
core::DensityMatrix aggregate(const core::SpaceTimeDiagram& diagram,
                              const core::GridSpec& grid, bool masked);

/// One quartet per interior position where all four involved cells are
/// observed; ordered by (matrix index, t, x).
std::vector<core::Quartet> extract_quartets(
    const std::vector<core::DensityMatrix>& matrices);

}  // namespace tse::discretize
