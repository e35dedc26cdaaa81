// End-to-end acceptance checks. Each criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <unistd.h>

#include "tse/calibrate.hpp"
#include "tse/discretize.hpp"
#include "tse/estimate.hpp"
#include "tse/evaluate.hpp"
#include "tse/ga.hpp"
#include "tse/scenario.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tse;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail) {
  std::printf("[%d] %s: %s (%s)\n", criterion, name, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double now_seconds(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string cli_bin() {
  const char* bin = std::getenv("TSE_CLI_BIN");
  if (bin == nullptr) {
    std::fprintf(stderr, "TSE_CLI_BIN is not set\n");
    std::exit(2);
  }
  return bin;
}

int run_cli(const std::string& args) {
  const std::string cmd = cli_bin() + " " + args + " >/dev/null 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    std::ostringstream os;
    os << "tse_acceptance_" << ::getpid() << "_" << tag;
    path = fs::temp_directory_path() / os.str();
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

constexpr double kJam = 1.0 / 6.5;

// ---------------------------------------------------------------------------
// Criterion 1: recover a planted fundamental diagram from exact quartets.
void criterion1() {
  const core::GridSpec grid(100.0, 16.0, 20.0, 2.0);
  const core::FDParams fd_true(9.2, 0.055, kJam);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uk(0.0, kJam);
  std::vector<core::Quartet> quartets;
  for (int i = 0; i < 60; ++i) {
    core::Quartet q{uk(rng), uk(rng), uk(rng), 0.0};
    q.k_next = calibrate::predict_next(fd_true, grid, q);
    quartets.push_back(q);
  }
  ga::GAConfig cfg;
  cfg.generations = 1600;
  cfg.population_size = 300;
  cfg.k_tournament = 5;
  cfg.crossover_pairs = 50;
  cfg.p_low_fitness = 0.65;
  cfg.p_high_fitness = 0.35;
  cfg.rng_seed = 4242;
  const auto t0 = std::chrono::steady_clock::now();
  const auto cal = calibrate::calibrate_fd(quartets, grid, kJam, cfg, 8);
  const double elapsed = now_seconds(t0);
  const double vf_err = std::fabs(cal.fd.v_f() - fd_true.v_f()) / fd_true.v_f();
  const double kc_err = std::fabs(cal.fd.k_c() - fd_true.k_c()) / fd_true.k_c();
  const bool pass =
      vf_err < 0.01 && kc_err < 0.02 && cal.rmse < 1e-6 && elapsed < 30.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "v_f err %.4f%%, k_c err %.4f%%, rmse %.3g, %.1fs",
                100.0 * vf_err, 100.0 * kc_err, cal.rmse, elapsed);
  report(1, "planted-FD recovery", pass, buf);
}

// ---------------------------------------------------------------------------
// Criterion 2: recover a planted boundary vector from a camera-masked matrix.
void criterion2() {
  const core::GridSpec grid(100.0, 16.0, 20.0, 2.0);
  const core::FDParams fd(9.2, 0.055, kJam);
  // Link starts empty and demand arrives only after three steps, so every
  // cell the camera never observes stays at zero density and the estimate is
  // judged on cells the observations actually constrain.
  core::BoundaryVector bv;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ufree(0.2 * 0.055, 0.7 * 0.055);
  bv.init.assign(grid.alpha(), 0.0);
  for (std::size_t j = 0; j < grid.beta(); ++j) {
    bv.inflow.push_back(j < 3 ? 0.0 : ufree(rng));
    bv.outflow.push_back(ufree(rng));
  }
  const auto full = core::ctm_run(fd, grid, bv);

  // Realistic sweep: a 6.5 m/s pass over an otherwise empty opposite lane
  // provides the camera trajectory and observation mask.
  scenario::ScenarioConfig sc{grid};
  sc.demand = 0.0;
  sc.camera_speed = {{0.0, 6.5}};
  const auto bundle = scenario::generate(sc);
  const auto obs = discretize::aggregate(bundle.diagram, grid, true);
  core::DensityMatrix partial(grid);
  for (std::size_t ix = 0; ix < grid.alpha(); ++ix)
    for (std::size_t it = 0; it < grid.beta(); ++it)
      if (obs.observed(ix, it)) partial.set(ix, it, full.at(ix, it));

  ga::GAConfig cfg;
  cfg.generations = 60;
  cfg.population_size = 500;
  cfg.k_tournament = 10;
  cfg.crossover_pairs = 50;
  cfg.p_low_fitness = 0.9;
  cfg.p_high_fitness = 0.1;
  cfg.rng_seed = 31337;
  const auto t0 = std::chrono::steady_clock::now();
  const auto est = estimate::estimate_density(partial, fd, cfg, 5);
  const double elapsed = now_seconds(t0);
  const double obs_rmse = -est.fitness;
  const auto mask = evaluate::camera_mask(bundle.diagram, grid);
  const double masked = evaluate::masked_rmse(full, est.completed, mask);
  const bool pass = obs_rmse <= 1e-3 && masked <= 0.002 && elapsed < 120.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "observed rmse %.3g, masked rmse %.3g, %.1fs", obs_rmse,
                masked, elapsed);
  report(2, "planted-boundary recovery", pass, buf);
}

// ---------------------------------------------------------------------------
// Criteria 3-5 share the artifacts of one full pipeline run.

struct PipelineStats {
  bool ok = false;
  double elapsed = 0.0;
  double baseline_mean = 0.0;
  double ga_mean = 0.0;
  double corr_density = 0.0;
  double corr_camera = 0.0;
  double vf_err = 0.0;
  double kc_err = 0.0;
};

PipelineStats run_pipeline(const fs::path& dir, int count) {
  PipelineStats s;
  const fs::path cfg = dir / "tse.json";
  if (run_cli("--config " + cfg.string() + " config-init") != 0) return s;
  if (count != 140) {
    std::string text = slurp(cfg);
    const std::string from = "\"count\": 140";
    const auto pos = text.find(from);
    if (pos == std::string::npos) return s;
    text.replace(pos, from.size(), "\"count\": " + std::to_string(count));
    std::ofstream(cfg, std::ios::binary) << text;
  }
  const fs::path out = dir / "out";
  const auto t0 = std::chrono::steady_clock::now();
  if (run_cli("--config " + cfg.string() + " --out " + out.string() +
              " --jobs 8 pipeline") != 0)
    return s;
  s.elapsed = now_seconds(t0);
  try {
    const json summary = json::parse(slurp(out / "summary.json"));
    const json calib = json::parse(slurp(out / "calibration.json"));
    const json fdj = json::parse(slurp(out / "fd.json"));
    s.baseline_mean = summary.at("baseline").at("mean_rmse").get<double>();
    s.ga_mean = summary.at("ga").at("mean_rmse").get<double>();
    s.corr_density =
        summary.at("ga_vs_density").at("correlation").get<double>();
    s.corr_camera =
        summary.at("ga_vs_camera_speed").at("correlation").get<double>();
    const double vf_cal = calib.at("fd").at("v_f").get<double>();
    const double kc_cal = calib.at("fd").at("k_c").get<double>();
    const double vf_meas = fdj.at("measured").at("v_f").get<double>();
    const double kc_meas = fdj.at("measured").at("k_c").get<double>();
    s.vf_err = std::fabs(vf_cal - vf_meas) / vf_meas;
    s.kc_err = std::fabs(kc_cal - kc_meas) / kc_meas;
  } catch (const std::exception&) {
    return s;
  }
  s.ok = true;
  return s;
}

std::string band_detail(const PipelineStats& s) {
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "baseline %.4f, ga %.4f (%.2fx), v_f err %.1f%%, k_c err "
                "%.1f%%, %.0fs",
                s.baseline_mean, s.ga_mean, s.ga_mean / s.baseline_mean,
                100.0 * s.vf_err, 100.0 * s.kc_err, s.elapsed);
  return buf;
}

bool bands_3(const PipelineStats& s) {
  return s.ok && s.baseline_mean <= 0.012 &&
         s.ga_mean <= 1.8 * s.baseline_mean && s.vf_err <= 0.05 &&
         s.kc_err <= 0.15;
}

void criterion3(const PipelineStats& full, const PipelineStats& reduced) {
  const bool pass = bands_3(full) && full.elapsed <= 7200.0 &&
                    bands_3(reduced) && reduced.elapsed <= 900.0;
  report(3, "batch statistical reproduction", pass,
         "140: " + band_detail(full) + "; 20: " + band_detail(reduced));
}

void criterion4(const PipelineStats& full) {
  const bool pass = full.ok && full.corr_density > 0.1 &&
                    std::fabs(full.corr_camera) < 0.15;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "corr(rmse, density) %.3f, corr(rmse, camera speed) %.3f",
                full.corr_density, full.corr_camera);
  report(4, "error trends", pass, buf);
}

// Mean of `value_col` over rows where `axis_col` takes its extreme values.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const fs::path& p) {
  CsvTable t;
  std::istringstream in(slurp(p));
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    if (first) {
      while (std::getline(row, field, ',')) t.header.push_back(field);
      first = false;
      continue;
    }
    std::vector<double> vals;
    while (std::getline(row, field, ',')) vals.push_back(std::stod(field));
    t.rows.push_back(std::move(vals));
  }
  return t;
}

bool budget_monotone(const CsvTable& t, const std::string& axis, double* lo_out,
                     double* hi_out) {
  std::size_t ai = t.header.size(), fi = t.header.size();
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    if (t.header[i] == axis) ai = i;
    if (t.header[i] == "fitness") fi = i;
  }
  if (ai >= t.header.size() || fi >= t.header.size() || t.rows.empty())
    return false;
  double lo = t.rows[0][ai], hi = t.rows[0][ai];
  for (const auto& r : t.rows) {
    lo = std::min(lo, r[ai]);
    hi = std::max(hi, r[ai]);
  }
  double lo_sum = 0.0, hi_sum = 0.0;
  int lo_n = 0, hi_n = 0;
  for (const auto& r : t.rows) {
    if (r[ai] == lo) {
      lo_sum += r[fi];
      ++lo_n;
    }
    if (r[ai] == hi) {
      hi_sum += r[fi];
      ++hi_n;
    }
  }
  *lo_out = lo_sum / lo_n;
  *hi_out = hi_sum / hi_n;
  return hi_sum / hi_n >= lo_sum / lo_n;
}

void criterion5(const fs::path& out) {
  const CsvTable fd_search = read_csv(out / "fd_search.csv");
  const CsvTable phase1 = read_csv(out / "boundary_search_phase1.csv");
  const CsvTable phase2 = read_csv(out / "boundary_search_phase2.csv");
  const bool counts = fd_search.rows.size() == 60 && phase1.rows.size() == 25 &&
                      phase2.rows.size() == 25;
  double a_lo = 0, a_hi = 0, b1_lo = 0, b1_hi = 0, b2_lo = 0, b2_hi = 0;
  const bool mono_a = budget_monotone(fd_search, "generations", &a_lo, &a_hi);
  const bool mono_b1 = budget_monotone(phase1, "k_tournament", &b1_lo, &b1_hi);
  const bool mono_b2 = budget_monotone(phase2, "population", &b2_lo, &b2_hi);
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "rows %zu/%zu/%zu; fitness lo->hi: %.2g->%.2g, %.2g->%.2g, "
                "%.2g->%.2g",
                fd_search.rows.size(), phase1.rows.size(), phase2.rows.size(),
                a_lo, a_hi, b1_lo, b1_hi, b2_lo, b2_hi);
  report(5, "grid-search shape", counts && mono_a && mono_b1 && mono_b2, buf);
}

// ---------------------------------------------------------------------------
// Criterion 6: library invariants.
bool check_conservation() {
  const core::GridSpec grid(100.0, 16.0, 20.0, 2.0);
  const core::FDParams fd(9.2, 0.055, kJam);
  core::BoundaryVector bv;
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uk(0.0, kJam);
  for (std::size_t i = 0; i < grid.alpha(); ++i) bv.init.push_back(uk(rng));
  // Zero upstream demand and a jammed downstream ghost close the link:
  // nothing can enter or leave, so the vehicle total must be constant.
  bv.inflow.assign(grid.beta(), 0.0);
  bv.outflow.assign(grid.beta(), kJam);
  const auto m = core::ctm_run(fd, grid, bv);
  double total0 = 0.0;
  for (std::size_t ix = 0; ix < grid.alpha(); ++ix) total0 += m.at(ix, 0);
  for (std::size_t it = 1; it < grid.beta(); ++it) {
    double total = 0.0;
    for (std::size_t ix = 0; ix < grid.alpha(); ++ix) total += m.at(ix, it);
    if (std::fabs(total - total0) > 1e-9 * total0) return false;
  }
  return true;
}

bool check_edie_identity() {
  scenario::ScenarioConfig c{core::GridSpec(100.0, 16.0, 20.0, 2.0)};
  c.demand = 0.4;
  c.signal = scenario::SignalSpec{60.0, 9.0, 9.0, 0.0};
  c.rng_seed = 67;
  const auto bundle = scenario::generate(c);
  const auto m = discretize::aggregate(bundle.diagram, c.grid, false);
  double cell_total = 0.0;
  for (std::size_t ix = 0; ix < c.grid.alpha(); ++ix)
    for (std::size_t it = 0; it < c.grid.beta(); ++it)
      cell_total += m.at(ix, it) * c.grid.dx() * c.grid.dt();
  double vehicle_seconds = 0.0;
  for (const auto& veh : bundle.diagram.vehicles) {
    const double t0 = std::max(0.0, veh.samples.front().t);
    const double t1 = std::min(c.grid.total_time(), veh.samples.back().t);
    vehicle_seconds += std::max(0.0, t1 - t0);
  }
  return vehicle_seconds > 0.0 &&
         std::fabs(cell_total - vehicle_seconds) <= 1e-6 * vehicle_seconds;
}

bool check_ga_determinism() {
  ga::GAConfig cfg;
  cfg.population_size = 80;
  cfg.generations = 40;
  cfg.gene_bounds.assign(10, {0.0, 1.0});
  cfg.rng_seed = 555;
  const auto fitness = [](const ga::Genome& g) {
    double s = 0.0;
    for (double v : g) s -= (v - 0.3) * (v - 0.3);
    return s;
  };
  const auto a = ga::run(cfg, fitness);
  const auto b = ga::run(cfg, fitness);
  if (std::memcmp(a.best_genome.data(), b.best_genome.data(),
                  a.best_genome.size() * sizeof(double)) != 0)
    return false;
  if (a.fitness_trace.size() != b.fitness_trace.size()) return false;
  return std::memcmp(a.fitness_trace.data(), b.fitness_trace.data(),
                     a.fitness_trace.size() * sizeof(double)) == 0;
}

bool check_crossover_multiset() {
  ga::Rng rng(901);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    ga::Genome a(12), b(12);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = u(rng);
      b[i] = u(rng);
    }
    const auto [c, d] = ga::uniform_crossover(a, b, rng);
    for (std::size_t i = 0; i < a.size(); ++i) {
      const bool straight = c[i] == a[i] && d[i] == b[i];
      const bool swapped = c[i] == b[i] && d[i] == a[i];
      if (!straight && !swapped) return false;
    }
  }
  return true;
}

bool check_bounds_every_generation() {
  ga::GAConfig cfg;
  cfg.population_size = 60;
  cfg.generations = 50;
  cfg.gene_bounds = {{-2.0, -1.0}, {0.5, 0.75}, {10.0, 11.0}};
  cfg.rng_seed = 31;
  bool in_bounds = true;
  const auto fitness = [&](const ga::Genome& g) {
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i] < cfg.gene_bounds[i].lo || g[i] > cfg.gene_bounds[i].hi)
        in_bounds = false;
    return -std::fabs(g[0] + 1.5);
  };
  ga::run(cfg, fitness);
  return in_bounds;
}

bool check_masked_rmse_axioms() {
  const core::GridSpec grid(100.0, 16.0, 20.0, 2.0);
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> uk(0.0, kJam);
  core::DensityMatrix a(grid), b(grid);
  for (std::size_t ix = 0; ix < grid.alpha(); ++ix)
    for (std::size_t it = 0; it < grid.beta(); ++it) {
      a.set(ix, it, uk(rng));
      b.set(ix, it, uk(rng));
    }
  evaluate::EvalMask mask;
  mask.alpha = grid.alpha();
  mask.beta = grid.beta();
  mask.included.assign(grid.alpha() * grid.beta(), 0);
  std::bernoulli_distribution coin(0.5);
  for (auto& v : mask.included) v = coin(rng) ? 1 : 0;
  mask.included[3] = 1;  // never fully empty
  if (evaluate::masked_rmse(a, a, mask) != 0.0) return false;
  return evaluate::masked_rmse(a, b, mask) == evaluate::masked_rmse(b, a, mask);
}

void criterion6() {
  const bool conservation = check_conservation();
  const bool edie = check_edie_identity();
  const bool determinism = check_ga_determinism();
  const bool crossover = check_crossover_multiset();
  const bool bounds = check_bounds_every_generation();
  const bool axioms = check_masked_rmse_axioms();
  char buf[240];
  std::snprintf(buf, sizeof(buf),
                "conservation %d, edie identity %d, determinism %d, crossover "
                "%d, bounds %d, rmse axioms %d",
                conservation, edie, determinism, crossover, bounds, axioms);
  report(6, "property suites",
         conservation && edie && determinism && crossover && bounds && axioms,
         buf);
}

}  // namespace

int main() {
  criterion1();
  criterion2();

  TempDir full_dir("full");
  const PipelineStats full = run_pipeline(full_dir.path, 140);
  TempDir reduced_dir("reduced");
  const PipelineStats reduced = run_pipeline(reduced_dir.path, 20);
  criterion3(full, reduced);
  criterion4(full);
  criterion5(full_dir.path / "out");

  criterion6();
  return g_failures == 0 ? 0 : 1;
}
