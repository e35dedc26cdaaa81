#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "tse/core.hpp"
#include "tse/ga.hpp"
#include "tse/scenario.hpp"

namespace tse::cli {

/// Per-scenario randomization ranges for synthetic batches. Scenarios are
/// drawn from two populations: free-flow runs with light Poisson demand, and
/// congested runs where a red phase ending at t = 0 (inside the warmup)
/// leaves a queue at the signal that discharges through the observed window.
struct BatchSpec {
  int count = 140;
  scenario::ScenarioConfig base{core::GridSpec{100.0, 16.0, 20.0, 2.0}};
  double congested_fraction = 0.30;
  double demand_free_min = 0.02;
  double demand_free_max = 0.10;
  double demand_congested_min = 0.30;
  double demand_congested_max = 0.50;
  double camera_speed_min = 6.0;
  double camera_speed_max = 7.0;
  double signal_position = 80.0;
  double signal_red = 10.0;
  double signal_green = 40.0;
  double warmup = 30.0;
};

/// Trajectory CSV input produced outside this tool.
struct IngestSpec {
  std::filesystem::path path;
  core::Fov fov{10.0, 60.0};
  double k_j = 1.0 / 6.5;
};

struct GridSearchSpec {
  int diagram_limit = 3;  // diagrams fed to the boundary-search phases
  int repetitions = 1;
};

struct RunConfig {
  core::GridSpec grid{100.0, 16.0, 20.0, 2.0};
  std::optional<BatchSpec> batch;    // exactly one of batch / ingest
  std::optional<IngestSpec> ingest;
  ga::GAConfig calibration_ga;
  ga::GAConfig estimation_ga;
  int repeats = 5;  // repeat-and-keep-best for both GA stages
  GridSearchSpec search;
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 1;
  int jobs = 0;  // 0 -> hardware concurrency
};

/// RunConfig with the published defaults for both GA stages.
RunConfig default_run_config();

/// Parses the JSON config file; throws ConfigError naming the offending key.
RunConfig load_config(const std::filesystem::path& path);

/// Writes a config file populated with every default, ready to edit.
std::string default_config_text();

int cmd_generate(const RunConfig& config);
int cmd_discretize(const RunConfig& config);
int cmd_calibrate(const RunConfig& config);
int cmd_estimate(const RunConfig& config);
int cmd_evaluate(const RunConfig& config);
int cmd_gridsearch(const RunConfig& config);
int cmd_pipeline(const RunConfig& config);

}  // namespace tse::cli
