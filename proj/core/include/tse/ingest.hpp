#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tse/core.hpp"

namespace tse::ingest {

/// One CSV row of the trajectory interchange format.
struct TrajectoryRecord {
  std::string run_id;
  std::string vehicle_id;
  std::string role;  // "vehicle" or "camera"
  double t = 0.0;
  double x = 0.0;
};

inline constexpr const char* kCsvHeader = "run_id,vehicle_id,role,t,x";

/// Loads trajectory runs from CSV (header run_id,vehicle_id,role,t,x).
/// One diagram per run_id, ordered by run_id; samples sorted by t and x
/// clipped to [0, L]. Every run must contain exactly one camera stream.
std::vector<core::SpaceTimeDiagram> load_runs(const std::filesystem::path& path,
                                              const core::GridSpec& grid,
                                              const core::Fov& fov);

/// Writes diagrams in canonical column order with deterministic row ordering
/// (run_id, role, vehicle_id, t); floats carry 9 significant digits.
/// Run ids are zero-padded indices.
void save_runs(const std::vector<core::SpaceTimeDiagram>& diagrams,
               const std::filesystem::path& path);

}  // namespace tse::ingest
