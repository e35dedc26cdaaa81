#include "tse/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "tse/discretize.hpp"

namespace tse::scenario {

namespace {

constexpr double kSampleStep = 0.1;  // s

bool signal_red(const SignalSpec& sig, double t) {
  const double cycle = sig.red + sig.green;
  if (cycle <= 0.0) return false;
  double phase = std::fmod(t - sig.offset, cycle);
  if (phase < 0.0) phase += cycle;
  return phase < sig.red;
}

struct Vehicle {
  std::size_t entry_step = 0;
  std::vector<double> positions;  // one per step from entry_step

  double position_at_step(std::size_t step) const {
    if (step < entry_step) return positions.front();
    const std::size_t i = step - entry_step;
    return i < positions.size() ? positions[i] : positions.back();
  }
};

void validate(const ScenarioConfig& c) {
  if (c.v_f <= 0.0 || c.v_f > c.grid.max_speed() * (1.0 + 1e-12)) {
    throw ConfigError("scenario: v_f must be in (0, dx/dt]");
  }
  if (c.s_min <= 0.0) throw ConfigError("scenario: s_min must be positive");
  if (c.demand < 0.0) throw ConfigError("scenario: demand must be non-negative");
  if (!(c.fov.near < c.fov.far)) throw ConfigError("scenario: fov.near must be < fov.far");
  if (c.camera_speed.empty()) throw ConfigError("scenario: camera speed profile is empty");
  if (c.warmup < 0.0) throw ConfigError("scenario: warmup must be non-negative");
  if (c.reaction_time <= c.s_min / c.v_f) {
    throw ConfigError(
        "scenario: reaction_time must exceed s_min/v_f so the backward wave "
        "is slower than v_f");
  }
}

core::Trajectory camera_trajectory(const ScenarioConfig& c, std::size_t n_steps) {
  core::Trajectory cam;
  cam.vehicle_id = "camera";
  cam.samples.reserve(n_steps + 1);
  double x = c.grid.link_length();
  std::size_t seg = 0;
  for (std::size_t it = 0; it <= n_steps; ++it) {
    const double t = static_cast<double>(it) * kSampleStep;
    cam.samples.push_back({t, x});
    while (seg + 1 < c.camera_speed.size() && c.camera_speed[seg + 1].t_start <= t) {
      ++seg;
    }
    x = std::max(0.0, x - c.camera_speed[seg].speed * kSampleStep);
  }
  return cam;
}

}  // namespace

ScenarioBundle generate(const ScenarioConfig& config) {
  validate(config);
  const double tau = config.reaction_time;
  const double wave = config.s_min / tau;
  const double k_j = 1.0 / config.s_min;
  const double k_c = k_j * wave / (config.v_f + wave);
  core::FDParams true_fd(config.v_f, k_c, k_j);

  const double total_time = config.grid.total_time();
  const std::size_t n_steps =
      static_cast<std::size_t>(std::round(total_time / kSampleStep));
  // The simulation runs over [-warmup, T]; only [0, T] is emitted. Step
  // indices below are simulation steps; warm_steps converts to real time.
  const std::size_t warm_steps =
      static_cast<std::size_t>(std::round(config.warmup / kSampleStep));
  const std::size_t sim_steps = warm_steps + n_steps;

  std::mt19937_64 rng(config.rng_seed);

  // Scheduled entry times: Poisson process over [-warmup, T).
  std::vector<double> schedule;
  if (config.demand > 0.0) {
    std::exponential_distribution<double> gap(config.demand);
    const double t_begin = -static_cast<double>(warm_steps) * kSampleStep;
    for (double t = t_begin + gap(rng); t < total_time; t += gap(rng)) {
      schedule.push_back(t);
    }
  }

  std::vector<Vehicle> vehicles;
  std::size_t next_entry = 0;
  for (std::size_t it = 0; it < sim_steps; ++it) {
    const double t = static_cast<double>(it) * kSampleStep -
                     static_cast<double>(warm_steps) * kSampleStep;

    // Entry: delayed while the previous vehicle is still within s_min.
    if (next_entry < schedule.size() && schedule[next_entry] <= t) {
      const bool blocked =
          !vehicles.empty() && vehicles.back().position_at_step(it) < config.s_min;
      if (!blocked) {
        Vehicle v;
        v.entry_step = it;
        v.positions.push_back(0.0);
        vehicles.push_back(std::move(v));
        ++next_entry;
      }
    }

    for (std::size_t vi = 0; vi < vehicles.size(); ++vi) {
      Vehicle& v = vehicles[vi];
      if (it < v.entry_step) continue;
      const double x = v.position_at_step(it);
      double x_next = x + config.v_f * kSampleStep;
      if (vi > 0) {
        // Newell: trail the leader's tau-delayed position by s_min.
        const std::size_t tau_steps =
            static_cast<std::size_t>(std::round(tau / kSampleStep));
        const std::size_t leader_step = it + 1 > tau_steps ? it + 1 - tau_steps : 0;
        x_next = std::min(x_next,
                          vehicles[vi - 1].position_at_step(leader_step) - config.s_min);
      }
      if (config.signal && x <= config.signal->position &&
          signal_red(*config.signal, t + kSampleStep)) {
        x_next = std::min(x_next, config.signal->position);
      }
      x_next = std::max(x_next, x);
      v.positions.push_back(x_next);
    }
  }

  core::SpaceTimeDiagram diagram{config.grid, {}, camera_trajectory(config, n_steps),
                                 config.fov};
  const double link_length = config.grid.link_length();
  for (std::size_t vi = 0; vi < vehicles.size(); ++vi) {
    core::Trajectory traj;
    char id[16];
    std::snprintf(id, sizeof(id), "veh%04zu", vi);
    traj.vehicle_id = id;
    const Vehicle& v = vehicles[vi];
    const std::size_t warm_steps_v =
        static_cast<std::size_t>(std::round(config.warmup / kSampleStep));
    for (std::size_t i = 0; i < v.positions.size(); ++i) {
      const std::size_t sim_step = v.entry_step + i;
      if (sim_step < warm_steps_v) {
        if (v.positions[i] >= link_length) break;  // exited during warmup
        continue;
      }
      const double t = static_cast<double>(sim_step - warm_steps_v) * kSampleStep;
      const double x = std::min(v.positions[i], link_length);
      traj.samples.push_back({t, x});
      if (v.positions[i] >= link_length) break;
    }
    if (traj.samples.size() >= 2) diagram.vehicles.push_back(std::move(traj));
  }

  core::DensityMatrix truth = discretize::aggregate(diagram, config.grid, false);
  core::BoundaryVector bv;
  const std::size_t alpha = config.grid.alpha();
  const std::size_t beta = config.grid.beta();
  for (std::size_t i = 0; i < alpha; ++i) {
    bv.init.push_back(std::clamp(truth.at(i, 0), 0.0, k_j));
  }
  for (std::size_t j = 0; j < beta; ++j) {
    bv.inflow.push_back(std::clamp(truth.at(0, j), 0.0, k_j));
    bv.outflow.push_back(std::clamp(truth.at(alpha - 1, j), 0.0, k_j));
  }

  return ScenarioBundle{std::move(diagram), true_fd, std::move(bv)};
}

core::SpaceTimeDiagram apply_camera_mask(const core::SpaceTimeDiagram& diagram) {
  return discretize::restrict_to_fov(diagram);
}

core::FDParams measure_true_fd(const std::vector<ScenarioBundle>& bundles) {
  if (bundles.empty()) throw ConfigError("measure_true_fd: no bundles");
  const double k_j = bundles.front().true_fd.k_j();

  std::vector<std::pair<double, double>> pairs;  // (density, flow)
  for (const auto& b : bundles) {
    const auto cells = discretize::edie_cells(b.diagram, b.diagram.grid);
    const double area = b.diagram.grid.dx() * b.diagram.grid.dt();
    for (const auto& c : cells) {
      const double k = c.time / area;
      const double q = c.distance / area;
      if (k > 1e-9) pairs.emplace_back(k, q);
    }
  }
  if (pairs.empty()) throw ConfigError("measure_true_fd: no occupied cells");

  double k_max = 0.0;
  for (const auto& [k, q] : pairs) k_max = std::max(k_max, k);

  // k_c: mean density of the well-populated bin with the highest mean flow.
  // Sparse bins are skipped so a handful of outlier cells cannot win the
  // argmax; the threshold falls back to 1 when the sample is tiny.
  constexpr int kBins = 24;
  std::vector<double> sum_q(kBins, 0.0);
  std::vector<double> sum_k(kBins, 0.0);
  std::vector<int> count(kBins, 0);
  for (const auto& [k, q] : pairs) {
    const int bin =
        std::min(kBins - 1, static_cast<int>(std::floor(k / k_max * kBins)));
    sum_q[bin] += q;
    sum_k[bin] += k;
    ++count[bin];
  }
  const int min_count = std::max<int>(
      1, std::min<int>(5, static_cast<int>(pairs.size() / 100)));
  int best_bin = -1;
  double best_q = -1.0;
  for (int b = 0; b < kBins; ++b) {
    if (count[b] >= min_count && sum_q[b] / count[b] > best_q) {
      best_q = sum_q[b] / count[b];
      best_bin = b;
    }
  }
  if (best_bin < 0) throw ConfigError("measure_true_fd: no populated bins");
  double k_c = sum_k[best_bin] / count[best_bin];
  k_c = std::clamp(k_c, 1e-6, 0.499 * k_j);

  // v_f: least-squares slope through the origin over the free-flow branch.
  double num = 0.0;
  double den = 0.0;
  for (const auto& [k, q] : pairs) {
    if (k <= k_c) {
      num += q * k;
      den += k * k;
    }
  }
  if (den <= 0.0) throw ConfigError("measure_true_fd: no free-flow cells");
  const double v_f = num / den;
  return core::FDParams(v_f, k_c, k_j);
}

double mean_camera_speed(const core::SpaceTimeDiagram& diagram) {
  const auto& s = diagram.camera.samples;
  if (s.size() < 2) return 0.0;
  // Average over the moving portion only; once the camera has finished the
  // link it idles in place and that tail would dilute the speed.
  double dist = 0.0;
  double t_last_move = s.front().t;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double step = std::abs(s[i + 1].x - s[i].x);
    dist += step;
    if (step > 0.0) t_last_move = s[i + 1].t;
  }
  const double span = t_last_move - s.front().t;
  return span > 0.0 ? dist / span : 0.0;
}

}  // namespace tse::scenario
