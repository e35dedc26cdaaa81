#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pipeline.hpp"
#include "tse/errors.hpp"
#include "tse/serialize.hpp"

namespace {

struct GlobalFlags {
  std::string config_path = "tse.json";
  std::string out_dir;
  long long seed = -1;
  int jobs = -1;
};

tse::cli::RunConfig resolve_config(const GlobalFlags& flags) {
  tse::cli::RunConfig config = tse::cli::load_config(flags.config_path);
  if (const char* env = std::getenv("TSE_OUT_DIR")) config.out_dir = env;
  if (!flags.out_dir.empty()) config.out_dir = flags.out_dir;
  if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
  if (flags.jobs >= 0) config.jobs = flags.jobs;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "tse: link-level traffic density estimation from moving-camera "
      "trajectories"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "Path to the JSON run config")
      ->capture_default_str();
  app.add_option("--out", flags.out_dir,
                 "Output directory (overrides config and TSE_OUT_DIR)");
  app.add_option("--seed", flags.seed, "Seed override");
  app.add_option("--jobs", flags.jobs, "Worker thread count override");

  std::string init_path;
  auto* init = app.add_subcommand(
      "config-init", "Write a config file populated with all defaults");
  init->add_option("path", init_path,
                   "Destination file (defaults to the --config path)");

  auto* generate = app.add_subcommand(
      "generate", "Synthesize scenario trajectories and ground truth");
  auto* discretize = app.add_subcommand(
      "discretize", "Aggregate observed trajectories into partial matrices");
  auto* calibrate = app.add_subcommand(
      "calibrate", "Fit the fundamental diagram from observed quartets");
  auto* estimate = app.add_subcommand(
      "estimate", "Estimate boundary conditions and complete every matrix");
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score estimates against ground truth and write the report");
  auto* gridsearch = app.add_subcommand(
      "gridsearch", "Run the GA hyperparameter searches");
  auto* pipeline =
      app.add_subcommand("pipeline", "Run every stage end to end");

  CLI11_PARSE(app, argc, argv);

  try {
    if (init->parsed()) {
      const std::string dest =
          init_path.empty() ? flags.config_path : init_path;
      tse::serialize::write_atomic(dest, tse::cli::default_config_text());
      std::cerr << "wrote " << dest << "\n";
      return 0;
    }
    const tse::cli::RunConfig config = resolve_config(flags);
    if (generate->parsed()) return tse::cli::cmd_generate(config);
    if (discretize->parsed()) return tse::cli::cmd_discretize(config);
    if (calibrate->parsed()) return tse::cli::cmd_calibrate(config);
    if (estimate->parsed()) return tse::cli::cmd_estimate(config);
    if (evaluate->parsed()) return tse::cli::cmd_evaluate(config);
    if (gridsearch->parsed()) return tse::cli::cmd_gridsearch(config);
    if (pipeline->parsed()) return tse::cli::cmd_pipeline(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << "error: no subcommand\n";
  return 1;
}
