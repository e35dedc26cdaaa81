#include "pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <thread>
#include <vector>

#include <json.hpp>

#include "tse/calibrate.hpp"
#include "tse/discretize.hpp"
#include "tse/estimate.hpp"
#include "tse/evaluate.hpp"
#include "tse/gridsearch.hpp"
#include "tse/ingest.hpp"
#include "tse/serialize.hpp"

namespace tse::cli {

namespace {

using nlohmann::json;

std::string index_name(const char* stem, std::size_t i, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%04zu%s.csv", stem, i, suffix);
  return buf;
}

std::filesystem::path matrix_path(const RunConfig& c, const char* stem,
                                  std::size_t i) {
  return c.out_dir / index_name(stem, i, "");
}

std::filesystem::path mask_path(const RunConfig& c, const char* stem,
                                std::size_t i) {
  return c.out_dir / index_name(stem, i, "_mask");
}

void require_artifact(const std::filesystem::path& p) {
  if (!std::filesystem::exists(p)) {
    throw IoError("missing upstream artifact: " + p.string() +
                  " (run the preceding stage first)");
  }
}

int worker_count(const RunConfig& c) {
  if (c.jobs > 0) return c.jobs;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Runs fn(i) for i in [0, n) on `jobs` threads; any exception is rethrown.
void parallel_for(std::size_t n, int jobs,
                  const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const int threads = std::min<std::size_t>(std::max(jobs, 1), n);
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---- config parsing ------------------------------------------------------

const json& need(const json& node, const std::string& key,
                 const std::string& where) {
  auto it = node.find(key);
  if (it == node.end()) {
    throw ConfigError("config: missing key '" + where + key + "'");
  }
  return *it;
}

double need_num(const json& node, const std::string& key,
                const std::string& where) {
  const json& v = need(node, key, where);
  if (!v.is_number()) {
    throw ConfigError("config: key '" + where + key + "' must be a number");
  }
  return v.get<double>();
}

double opt_num(const json& node, const std::string& key, double fallback,
               const std::string& where) {
  if (!node.contains(key)) return fallback;
  return need_num(node, key, where);
}

ga::GAConfig parse_ga(const json& node, const ga::GAConfig& defaults,
                      const std::string& where) {
  ga::GAConfig cfg = defaults;
  cfg.generations = static_cast<int>(
      opt_num(node, "generations", cfg.generations, where));
  cfg.population_size = static_cast<int>(
      opt_num(node, "population", cfg.population_size, where));
  cfg.k_tournament = static_cast<int>(
      opt_num(node, "k_tournament", cfg.k_tournament, where));
  cfg.crossover_pairs = static_cast<int>(
      opt_num(node, "crossover_pairs", cfg.crossover_pairs, where));
  cfg.p_low_fitness = opt_num(node, "mutation_low", cfg.p_low_fitness, where);
  cfg.p_high_fitness = opt_num(node, "mutation_high", cfg.p_high_fitness, where);
  return cfg;
}

// ---- per-stage state -----------------------------------------------------

struct LoadedRuns {
  std::vector<core::SpaceTimeDiagram> diagrams;
  double k_j = 0.0;
};

LoadedRuns load_runs_artifact(const RunConfig& c) {
  const auto path = c.out_dir / "runs.csv";
  require_artifact(path);
  core::Fov fov = c.batch ? c.batch->base.fov : c.ingest->fov;
  const double k_j =
      c.batch ? 1.0 / c.batch->base.s_min : c.ingest->k_j;
  return LoadedRuns{ingest::load_runs(path, c.grid, fov), k_j};
}

core::FDParams load_fd(const json& node, const std::string& where) {
  return core::FDParams(need_num(node, "v_f", where),
                        need_num(node, "k_c", where),
                        need_num(node, "k_j", where));
}

json fd_json(const core::FDParams& fd) {
  return json{{"v_f", fd.v_f()}, {"k_c", fd.k_c()}, {"k_j", fd.k_j()}};
}

/// True FD for the evaluation baseline: exact in synthetic mode, otherwise
/// the calibrated one (no ground-truth FD exists for ingested data).
core::FDParams baseline_fd(const RunConfig& c) {
  const auto path = c.out_dir / "fd.json";
  require_artifact(path);
  std::ifstream in(path);
  json j = json::parse(in);
  return load_fd(need(j, "true", "fd."), "fd.true.");
}

scenario::ScenarioConfig scenario_for_index(const BatchSpec& batch,
                                            const core::GridSpec& grid,
                                            std::uint64_t seed, std::size_t i) {
  scenario::ScenarioConfig sc = batch.base;
  sc.grid = grid;
  sc.rng_seed = seed + i;
  std::mt19937_64 rng(seed * 6364136223846793005ull + i);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool congested = unit(rng) < batch.congested_fraction;
  const double u_demand = unit(rng);
  const double u_camera = unit(rng);
  sc.demand = congested
                  ? batch.demand_congested_min +
                        (batch.demand_congested_max - batch.demand_congested_min) *
                            u_demand
                  : batch.demand_free_min +
                        (batch.demand_free_max - batch.demand_free_min) * u_demand;
  const double cam = batch.camera_speed_min +
                     (batch.camera_speed_max - batch.camera_speed_min) * u_camera;
  sc.camera_speed = {{0.0, cam}};
  if (congested) {
    // Red for the last signal_red seconds of the warmup, green through the
    // whole observed window: the queue built before t = 0 discharges on
    // camera, giving congested cells without an active red in [0, T].
    sc.signal = scenario::SignalSpec{batch.signal_position, batch.signal_red,
                                     batch.signal_green, -batch.signal_red};
    sc.warmup = batch.warmup;
  }
  return sc;
}

}  // namespace

RunConfig default_run_config() {
  RunConfig c;
  c.batch = BatchSpec{};
  c.batch->base.grid = c.grid;
  c.calibration_ga.generations = 100;
  c.calibration_ga.population_size = 56;
  c.calibration_ga.k_tournament = 5;
  c.calibration_ga.crossover_pairs = 20;
  c.calibration_ga.p_low_fitness = 0.65;
  c.calibration_ga.p_high_fitness = 0.35;
  c.estimation_ga.generations = 60;
  c.estimation_ga.population_size = 500;
  c.estimation_ga.k_tournament = 10;
  c.estimation_ga.crossover_pairs = 50;
  c.estimation_ga.p_low_fitness = 0.9;
  c.estimation_ga.p_high_fitness = 0.1;
  return c;
}

std::string default_config_text() {
  const RunConfig c = default_run_config();
  json j;
  j["grid"] = {{"link_length", c.grid.link_length()},
               {"total_time", c.grid.total_time()},
               {"dx", c.grid.dx()},
               {"dt", c.grid.dt()}};
  const BatchSpec& b = *c.batch;
  j["scenario"] = {{"count", b.count},
                   {"v_f", b.base.v_f},
                   {"s_min", b.base.s_min},
                   {"fov_near", b.base.fov.near},
                   {"fov_far", b.base.fov.far},
                   {"reaction_time", b.base.reaction_time},
                   {"congested_fraction", b.congested_fraction},
                   {"demand_free_min", b.demand_free_min},
                   {"demand_free_max", b.demand_free_max},
                   {"demand_congested_min", b.demand_congested_min},
                   {"demand_congested_max", b.demand_congested_max},
                   {"camera_speed_min", b.camera_speed_min},
                   {"camera_speed_max", b.camera_speed_max},
                   {"signal_position", b.signal_position},
                   {"signal_red", b.signal_red},
                   {"signal_green", b.signal_green},
                   {"warmup", b.warmup}};
  j["calibration_ga"] = {{"generations", c.calibration_ga.generations},
                         {"population", c.calibration_ga.population_size},
                         {"k_tournament", c.calibration_ga.k_tournament},
                         {"crossover_pairs", c.calibration_ga.crossover_pairs},
                         {"mutation_low", c.calibration_ga.p_low_fitness},
                         {"mutation_high", c.calibration_ga.p_high_fitness}};
  j["estimation_ga"] = {{"generations", c.estimation_ga.generations},
                        {"population", c.estimation_ga.population_size},
                        {"k_tournament", c.estimation_ga.k_tournament},
                        {"crossover_pairs", c.estimation_ga.crossover_pairs},
                        {"mutation_low", c.estimation_ga.p_low_fitness},
                        {"mutation_high", c.estimation_ga.p_high_fitness}};
  j["repeats"] = c.repeats;
  j["gridsearch"] = {{"diagram_limit", c.search.diagram_limit},
                     {"repetitions", c.search.repetitions}};
  j["out_dir"] = c.out_dir.string();
  j["seed"] = c.seed;
  j["jobs"] = c.jobs;
  // To analyze externally produced trajectories instead of synthetic ones,
  // replace the "scenario" section with:
  //   "ingest": {"path": "runs.csv", "fov_near": 10, "fov_far": 60, "k_j": 0.1538}
  return j.dump(2) + "\n";
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config: invalid JSON in " + path.string() + ": " +
                      e.what());
  }

  RunConfig c = default_run_config();
  const json& g = need(j, "grid", "");
  c.grid = core::GridSpec(need_num(g, "link_length", "grid."),
                          need_num(g, "total_time", "grid."),
                          need_num(g, "dx", "grid."), need_num(g, "dt", "grid."));

  const bool has_scenario = j.contains("scenario");
  const bool has_ingest = j.contains("ingest");
  if (has_scenario == has_ingest) {
    throw ConfigError(
        "config: exactly one of 'scenario' and 'ingest' must be set");
  }
  if (has_scenario) {
    const json& s = j["scenario"];
    BatchSpec b;
    b.base.grid = c.grid;
    b.count = static_cast<int>(opt_num(s, "count", b.count, "scenario."));
    if (b.count < 1) throw ConfigError("config: key 'scenario.count' must be >= 1");
    b.base.v_f = opt_num(s, "v_f", b.base.v_f, "scenario.");
    b.base.s_min = opt_num(s, "s_min", b.base.s_min, "scenario.");
    b.base.fov.near = opt_num(s, "fov_near", b.base.fov.near, "scenario.");
    b.base.fov.far = opt_num(s, "fov_far", b.base.fov.far, "scenario.");
    b.base.reaction_time =
        opt_num(s, "reaction_time", b.base.reaction_time, "scenario.");
    b.congested_fraction =
        opt_num(s, "congested_fraction", b.congested_fraction, "scenario.");
    b.demand_free_min =
        opt_num(s, "demand_free_min", b.demand_free_min, "scenario.");
    b.demand_free_max =
        opt_num(s, "demand_free_max", b.demand_free_max, "scenario.");
    b.demand_congested_min = opt_num(s, "demand_congested_min",
                                     b.demand_congested_min, "scenario.");
    b.demand_congested_max = opt_num(s, "demand_congested_max",
                                     b.demand_congested_max, "scenario.");
    b.camera_speed_min =
        opt_num(s, "camera_speed_min", b.camera_speed_min, "scenario.");
    b.camera_speed_max =
        opt_num(s, "camera_speed_max", b.camera_speed_max, "scenario.");
    b.signal_position =
        opt_num(s, "signal_position", b.signal_position, "scenario.");
    b.signal_red = opt_num(s, "signal_red", b.signal_red, "scenario.");
    b.signal_green = opt_num(s, "signal_green", b.signal_green, "scenario.");
    b.warmup = opt_num(s, "warmup", b.warmup, "scenario.");
    if (b.congested_fraction < 0.0 || b.congested_fraction > 1.0) {
      throw ConfigError(
          "config: key 'scenario.congested_fraction' must be in [0, 1]");
    }
    if (b.demand_free_min > b.demand_free_max ||
        b.demand_congested_min > b.demand_congested_max) {
      throw ConfigError("config: scenario demand ranges are inverted");
    }
    if (b.camera_speed_min > b.camera_speed_max || b.camera_speed_min <= 0.0) {
      throw ConfigError("config: key 'scenario.camera_speed_min' is invalid");
    }
    c.batch = b;
    c.ingest.reset();
  } else {
    const json& s = j["ingest"];
    IngestSpec spec;
    const json& p = need(s, "path", "ingest.");
    if (!p.is_string()) {
      throw ConfigError("config: key 'ingest.path' must be a string");
    }
    spec.path = p.get<std::string>();
    spec.fov.near = opt_num(s, "fov_near", spec.fov.near, "ingest.");
    spec.fov.far = opt_num(s, "fov_far", spec.fov.far, "ingest.");
    spec.k_j = opt_num(s, "k_j", spec.k_j, "ingest.");
    c.ingest = spec;
    c.batch.reset();
  }

  if (j.contains("calibration_ga")) {
    c.calibration_ga = parse_ga(j["calibration_ga"], c.calibration_ga,
                                "calibration_ga.");
  }
  if (j.contains("estimation_ga")) {
    c.estimation_ga =
        parse_ga(j["estimation_ga"], c.estimation_ga, "estimation_ga.");
  }
  c.repeats = static_cast<int>(opt_num(j, "repeats", c.repeats, ""));
  if (c.repeats < 1) throw ConfigError("config: key 'repeats' must be >= 1");
  if (j.contains("gridsearch")) {
    const json& s = j["gridsearch"];
    c.search.diagram_limit = static_cast<int>(
        opt_num(s, "diagram_limit", c.search.diagram_limit, "gridsearch."));
    c.search.repetitions = static_cast<int>(
        opt_num(s, "repetitions", c.search.repetitions, "gridsearch."));
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) {
      throw ConfigError("config: key 'out_dir' must be a string");
    }
    c.out_dir = j["out_dir"].get<std::string>();
  }
  c.seed = static_cast<std::uint64_t>(opt_num(j, "seed", c.seed, ""));
  c.jobs = static_cast<int>(opt_num(j, "jobs", c.jobs, ""));
  return c;
}

// ---- stages ---------------------------------------------------------------

int cmd_generate(const RunConfig& c) {
  std::filesystem::create_directories(c.out_dir);
  if (!c.batch) {
    // Ingest mode: copy the external trajectories into the canonical layout
    // and aggregate whatever ground truth they contain.
    require_artifact(c.ingest->path);
    const auto runs = ingest::load_runs(c.ingest->path, c.grid, c.ingest->fov);
    ingest::save_runs(runs, c.out_dir / "runs.csv");
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const auto truth = discretize::aggregate(runs[i], c.grid, false);
      serialize::save_matrix(truth, matrix_path(c, "truth", i),
                             mask_path(c, "truth", i));
    }
    json fd;
    fd["note"] = "ingested data: no planted fundamental diagram";
    serialize::write_atomic(c.out_dir / "fd.json", fd.dump(2) + "\n");
    std::cerr << "generate: ingested " << runs.size() << " runs\n";
    return 0;
  }

  const BatchSpec& batch = *c.batch;
  const std::size_t n = static_cast<std::size_t>(batch.count);
  std::vector<std::optional<scenario::ScenarioBundle>> slots(n);
  parallel_for(n, worker_count(c), [&](std::size_t i) {
    slots[i] = scenario::generate(scenario_for_index(batch, c.grid, c.seed, i));
  });
  std::vector<scenario::ScenarioBundle> bundles;
  bundles.reserve(n);
  for (auto& s : slots) bundles.push_back(std::move(*s));

  std::vector<core::SpaceTimeDiagram> diagrams;
  for (const auto& b : bundles) diagrams.push_back(b.diagram);
  ingest::save_runs(diagrams, c.out_dir / "runs.csv");
  for (std::size_t i = 0; i < n; ++i) {
    const auto truth = discretize::aggregate(bundles[i].diagram, c.grid, false);
    serialize::save_matrix(truth, matrix_path(c, "truth", i),
                           mask_path(c, "truth", i));
  }

  json fd;
  fd["true"] = fd_json(bundles.front().true_fd);
  fd["measured"] = fd_json(scenario::measure_true_fd(bundles));
  serialize::write_atomic(c.out_dir / "fd.json", fd.dump(2) + "\n");
  std::cerr << "generate: wrote " << n << " scenarios to " << c.out_dir.string()
            << "\n";
  return 0;
}

int cmd_discretize(const RunConfig& c) {
  const LoadedRuns runs = load_runs_artifact(c);
  std::vector<core::DensityMatrix> partials;
  for (std::size_t i = 0; i < runs.diagrams.size(); ++i) {
    partials.push_back(core::DensityMatrix(c.grid));
  }
  parallel_for(runs.diagrams.size(), worker_count(c), [&](std::size_t i) {
    partials[i] = discretize::aggregate(runs.diagrams[i], c.grid, true);
  });
  for (std::size_t i = 0; i < partials.size(); ++i) {
    serialize::save_matrix(partials[i], matrix_path(c, "partial", i),
                           mask_path(c, "partial", i));
  }
  std::cerr << "discretize: wrote " << partials.size() << " partial matrices\n";
  return 0;
}

namespace {

std::vector<core::DensityMatrix> load_matrices(const RunConfig& c,
                                               const char* stem) {
  std::vector<core::DensityMatrix> out;
  for (std::size_t i = 0;; ++i) {
    const auto values = matrix_path(c, stem, i);
    if (!std::filesystem::exists(values)) {
      if (i == 0) require_artifact(values);
      break;
    }
    out.push_back(serialize::load_matrix(c.grid, values, mask_path(c, stem, i)));
  }
  return out;
}

}  // namespace

int cmd_calibrate(const RunConfig& c) {
  const auto partials = load_matrices(c, "partial");
  const auto quartets = discretize::extract_quartets(partials);
  if (quartets.empty()) {
    throw ConfigError("calibrate: no quartets observable in the partial data");
  }
  const double k_j = c.batch ? 1.0 / c.batch->base.s_min : c.ingest->k_j;
  ga::GAConfig ga_config = c.calibration_ga;
  ga_config.rng_seed = c.seed;
  const auto result =
      calibrate::calibrate_fd(quartets, c.grid, k_j, ga_config, c.repeats);
  serialize::save_calibration(result, c.out_dir / "calibration.json");
  std::cerr << "calibrate: " << quartets.size() << " quartets -> v_f "
            << result.fd.v_f() << ", k_c " << result.fd.k_c() << ", rmse "
            << result.rmse << "\n";
  return 0;
}

int cmd_estimate(const RunConfig& c) {
  const auto partials = load_matrices(c, "partial");
  require_artifact(c.out_dir / "calibration.json");
  const auto calibration =
      serialize::load_calibration(c.out_dir / "calibration.json");

  std::vector<estimate::EstimationResult> results;
  results.reserve(partials.size());
  for (std::size_t i = 0; i < partials.size(); ++i) {
    results.push_back(estimate::EstimationResult{
        core::BoundaryVector{}, core::DensityMatrix(c.grid), 0.0, {}});
  }
  parallel_for(partials.size(), worker_count(c), [&](std::size_t i) {
    ga::GAConfig ga_config = c.estimation_ga;
    ga_config.rng_seed = c.seed + 7919ull * (i + 1);
    results[i] =
        estimate::estimate_density(partials[i], calibration.fd, ga_config,
                                   c.repeats);
  });

  std::string fitness_csv = "run,fitness\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    serialize::save_matrix(results[i].completed, matrix_path(c, "estimate", i),
                           mask_path(c, "estimate", i));
    fitness_csv += std::to_string(i) + "," +
                   serialize::format_double(results[i].fitness) + "\n";
  }
  serialize::write_atomic(c.out_dir / "estimates.csv", fitness_csv);
  std::cerr << "estimate: completed " << results.size() << " matrices\n";
  return 0;
}

int cmd_evaluate(const RunConfig& c) {
  const LoadedRuns runs = load_runs_artifact(c);
  const auto truths = load_matrices(c, "truth");
  const auto estimates = load_matrices(c, "estimate");
  if (truths.size() != runs.diagrams.size() ||
      estimates.size() != runs.diagrams.size()) {
    throw ConfigError("evaluate: truth/estimate artifact counts disagree with runs.csv");
  }
  const core::FDParams fd_true = baseline_fd(c);

  std::vector<evaluate::ScenarioEval> scenarios;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const auto bv = estimate::extract_true_boundary(truths[i], fd_true.k_j());
    auto baseline = estimate::baseline_known(fd_true, c.grid, bv);
    double sum = 0.0;
    for (std::size_t ix = 0; ix < c.grid.alpha(); ++ix) {
      for (std::size_t it = 0; it < c.grid.beta(); ++it) {
        sum += truths[i].at(ix, it);
      }
    }
    scenarios.push_back(evaluate::ScenarioEval{
        truths[i], estimates[i], std::move(baseline),
        evaluate::camera_mask(runs.diagrams[i], c.grid),
        sum / static_cast<double>(c.grid.alpha() * c.grid.beta()),
        scenario::mean_camera_speed(runs.diagrams[i])});
  }

  const auto report = evaluate::batch_report(scenarios);
  serialize::save_report_csv(report, c.out_dir / "report.csv");
  serialize::save_report_summary(report, c.out_dir / "summary.json");

  std::vector<double> ga, base, dens, speed;
  for (const auto& row : report.rows) {
    ga.push_back(row.rmse_ga);
    base.push_back(row.rmse_baseline);
    dens.push_back(row.mean_density);
    speed.push_back(row.camera_speed);
  }
  serialize::save_histogram_svg(ga, base, "masked RMSE (veh/m)",
                                c.out_dir / "rmse_hist.svg");
  if (report.rows.size() >= 3) {
    serialize::save_scatter_svg(dens, ga, report.ga_vs_density,
                                "mean density (veh/m)", "GA RMSE (veh/m)",
                                c.out_dir / "rmse_vs_density.svg");
    serialize::save_scatter_svg(speed, ga, report.ga_vs_camera_speed,
                                "camera speed (m/s)", "GA RMSE (veh/m)",
                                c.out_dir / "rmse_vs_camera_speed.svg");
  }
  std::cerr << "evaluate: GA mean RMSE " << report.ga_mean << ", baseline mean "
            << report.baseline_mean << " over " << report.rows.size()
            << " scenarios\n";
  return 0;
}

int cmd_gridsearch(const RunConfig& c) {
  const auto partials = load_matrices(c, "partial");
  const auto quartets = discretize::extract_quartets(partials);
  if (quartets.empty()) {
    throw ConfigError("gridsearch: no quartets observable in the partial data");
  }
  const double k_j = c.batch ? 1.0 / c.batch->base.s_min : c.ingest->k_j;

  auto fd_spec = gridsearch::fd_search_spec(c.seed);
  fd_spec.repetitions = c.search.repetitions;
  const auto fd_table = gridsearch::search_fd(quartets, c.grid, k_j, fd_spec);
  serialize::save_search_table(fd_table, c.out_dir / "fd_search.csv");
  std::cerr << "gridsearch: fd search " << fd_table.rows.size() << " points\n";

  require_artifact(c.out_dir / "calibration.json");
  const auto calibration =
      serialize::load_calibration(c.out_dir / "calibration.json");
  std::vector<core::DensityMatrix> subset;
  const std::size_t limit = std::min<std::size_t>(
      partials.size(), std::max(c.search.diagram_limit, 1));
  for (std::size_t i = 0; i < limit; ++i) subset.push_back(partials[i]);

  auto p1 = gridsearch::boundary_phase1_spec(c.seed + 1);
  p1.repetitions = c.search.repetitions;
  const auto t1 = gridsearch::search_boundary(subset, calibration.fd, p1);
  serialize::save_search_table(t1, c.out_dir / "boundary_search_phase1.csv");
  std::cerr << "gridsearch: boundary phase 1 " << t1.rows.size() << " points\n";

  auto p2 = gridsearch::boundary_phase2_spec(c.seed + 2);
  p2.repetitions = c.search.repetitions;
  const auto t2 = gridsearch::search_boundary(subset, calibration.fd, p2);
  serialize::save_search_table(t2, c.out_dir / "boundary_search_phase2.csv");
  std::cerr << "gridsearch: boundary phase 2 " << t2.rows.size() << " points\n";
  return 0;
}

int cmd_pipeline(const RunConfig& c) {
  int rc = cmd_generate(c);
  if (rc == 0) rc = cmd_discretize(c);
  if (rc == 0) rc = cmd_calibrate(c);
  if (rc == 0) rc = cmd_estimate(c);
  if (rc == 0) rc = cmd_evaluate(c);
  if (rc == 0) rc = cmd_gridsearch(c);
  return rc;
}

}  // namespace tse::cli
