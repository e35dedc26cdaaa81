#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tse/core.hpp"

namespace tse::scenario {

/// Fixed-cycle traffic signal on the link; red for `red` seconds starting
/// at `offset` within each red+green cycle.
struct SignalSpec {
  double position = 0.0;  // meters from link entry
  double red = 0.0;       // seconds
  double green = 0.0;     // seconds
  double offset = 0.0;    // seconds
};

/// Piecewise-constant camera speed, segments ordered by start time.
struct SpeedSegment {
  double t_start = 0.0;
  double speed = 0.0;  // m/s
};

struct ScenarioConfig {
  core::GridSpec grid;
  double v_f = 10.0;   // free-flow speed, m/s
  double s_min = 6.5;  // minimum headway distance, m
  core::Fov fov{10.0, 60.0};
  std::optional<SignalSpec> signal;
  double demand = 0.1;  // mean vehicle entry rate, veh/s
  std::vector<SpeedSegment> camera_speed{{0.0, 8.5}};
  // Newell wave timing: the congested-branch wave speed is s_min / reaction_time.
  double reaction_time = 1.0;  // s
  // Seconds of traffic simulated before t = 0 so the observed window starts
  // on an already-populated link; signal phases use real time, so a red
  // interval placed inside the warmup leaves a discharging queue at t = 0.
  double warmup = 0.0;  // s
  std::uint64_t rng_seed = 0;
};

struct ScenarioBundle {
  core::SpaceTimeDiagram diagram;  // full ground truth
  core::FDParams true_fd;
  core::BoundaryVector true_bv;  // measured from the ground-truth matrix
};

/// Synthetic ground truth: Poisson arrivals following Newell's car-following
/// rule (trajectories exactly consistent with a triangular FD), optional
/// signal-induced queues, and a camera traversing the link in the opposing
/// direction. Deterministic given rng_seed.
ScenarioBundle generate(const ScenarioConfig& config);

/// Restricts vehicle trajectories to samples within the camera's FOV band.
/// Idempotent.
core::SpaceTimeDiagram apply_camera_mask(const core::SpaceTimeDiagram& diagram);

/// Empirical FD from ground-truth Edie (density, flow) cell pairs:
/// v_f from the free-flow branch slope, k_c at the flow maximum, k_j from
/// the bundles' headway. Evaluation-only; never an estimator input.
core::FDParams measure_true_fd(const std::vector<ScenarioBundle>& bundles);

/// Mean camera speed over the run (total distance / total time).
double mean_camera_speed(const core::SpaceTimeDiagram& diagram);

}  // namespace tse::scenario
