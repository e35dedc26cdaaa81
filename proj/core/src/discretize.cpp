#include "tse/discretize.hpp"

#include <algorithm>
#include <cmath>

namespace tse::discretize {

namespace {

// Splits the segment (t0,x0)-(t1,x1) at every time-gridline and cell-edge
// crossing and accumulates each piece into the cell holding its midpoint.
void accumulate_segment(std::vector<EdieCell>& cells, const core::GridSpec& grid,
                        double t0, double x0, double t1, double x1) {
  if (!(t1 > t0)) return;
  // Clip to the space-time domain in time; x is already within [0, L].
  if (t1 <= 0.0 || t0 >= grid.total_time()) return;
  if (t0 < 0.0) {
    x0 = x0 + (x1 - x0) * (0.0 - t0) / (t1 - t0);
    t0 = 0.0;
  }
  if (t1 > grid.total_time()) {
    x1 = x0 + (x1 - x0) * (grid.total_time() - t0) / (t1 - t0);
    t1 = grid.total_time();
  }
  if (!(t1 > t0)) return;

  std::vector<double> cuts;
  cuts.push_back(t0);
  const double dt = grid.dt();
  for (double tg = (std::floor(t0 / dt) + 1.0) * dt; tg < t1; tg += dt) {
    cuts.push_back(tg);
  }
  const double dx = grid.dx();
  if (x1 != x0) {
    const double lo = std::min(x0, x1);
    const double hi = std::max(x0, x1);
    for (double xg = (std::floor(lo / dx) + 1.0) * dx; xg < hi; xg += dx) {
      cuts.push_back(t0 + (t1 - t0) * (xg - x0) / (x1 - x0));
    }
  }
  cuts.push_back(t1);
  std::sort(cuts.begin(), cuts.end());

  const std::size_t alpha = grid.alpha();
  const std::size_t beta = grid.beta();
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (!(b > a)) continue;
    const double tm = 0.5 * (a + b);
    const double xm = x0 + (x1 - x0) * (tm - t0) / (t1 - t0);
    const std::size_t ix = std::min(
        alpha - 1, static_cast<std::size_t>(std::max(0.0, std::floor(xm / dx))));
    const std::size_t it = std::min(
        beta - 1, static_cast<std::size_t>(std::max(0.0, std::floor(tm / dt))));
    const double frac = (b - a) / (t1 - t0);
    auto& cell = cells[ix * beta + it];
    cell.time += b - a;
    cell.distance += std::abs(x1 - x0) * frac;
  }
}

// Range of the camera position over [t0, t1], from samples plus
// interpolated interval endpoints.
std::pair<double, double> camera_range(const core::Trajectory& camera,
                                       double t0, double t1) {
  double lo = camera.position_at(t0);
  double hi = lo;
  const double p1 = camera.position_at(t1);
  lo = std::min(lo, p1);
  hi = std::max(hi, p1);
  for (const auto& s : camera.samples) {
    if (s.t > t0 && s.t < t1) {
      lo = std::min(lo, s.x);
      hi = std::max(hi, s.x);
    }
  }
  return {lo, hi};
}

}  // namespace

std::vector<EdieCell> edie_cells(const core::SpaceTimeDiagram& diagram,
                                 const core::GridSpec& grid) {
  std::vector<EdieCell> cells(grid.alpha() * grid.beta());
  for (const auto& veh : diagram.vehicles) {
    for (std::size_t i = 0; i + 1 < veh.samples.size(); ++i) {
      accumulate_segment(cells, grid, veh.samples[i].t, veh.samples[i].x,
                         veh.samples[i + 1].t, veh.samples[i + 1].x);
    }
  }
  return cells;
}

core::SpaceTimeDiagram restrict_to_fov(const core::SpaceTimeDiagram& diagram) {
  core::SpaceTimeDiagram out{diagram.grid, {}, diagram.camera, diagram.fov};
  for (const auto& veh : diagram.vehicles) {
    core::Trajectory cut;
    cut.vehicle_id = veh.vehicle_id;
    const auto& s = veh.samples;
    auto dist = [&](std::size_t i) {
      return core::camera_distance(diagram, s[i].t, s[i].x);
    };
    auto inside = [&](double d) {
      return d >= diagram.fov.near && d <= diagram.fov.far;
    };
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double d = dist(i);
      if (inside(d)) {
        // Interpolate an entry sample on the crossed FOV edge.
        if (cut.samples.empty() && i > 0) {
          const double dp = dist(i - 1);
          const double edge = dp < diagram.fov.near ? diagram.fov.near
                                                    : diagram.fov.far;
          if (!inside(dp) && d != dp) {
            const double w = (edge - dp) / (d - dp);
            if (w > 0.0 && w < 1.0) {
              cut.samples.push_back({s[i - 1].t + w * (s[i].t - s[i - 1].t),
                                     s[i - 1].x + w * (s[i].x - s[i - 1].x)});
            }
          }
        }
        cut.samples.push_back(s[i]);
      } else if (!cut.samples.empty()) {
        // Interpolate an exit sample, then stop; a vehicle crosses the
        // moving FOV band once.
        const double dp = dist(i - 1);
        const double edge = d < diagram.fov.near ? diagram.fov.near
                                                 : diagram.fov.far;
        if (inside(dp) && d != dp) {
          const double w = (edge - dp) / (d - dp);
          if (w > 0.0 && w < 1.0) {
            cut.samples.push_back({s[i - 1].t + w * (s[i].t - s[i - 1].t),
                                   s[i - 1].x + w * (s[i].x - s[i - 1].x)});
          }
        }
        break;
      }
    }
    if (cut.samples.size() >= 2) out.vehicles.push_back(std::move(cut));
  }
  return out;
}

core::DensityMatrix aggregate(const core::SpaceTimeDiagram& diagram,
                              const core::GridSpec& grid, bool masked) {
  if (std::abs(diagram.grid.link_length() - grid.link_length()) > 1e-9) {
    throw ConfigError("aggregate: diagram and grid disagree on link length");
  }
  std::vector<EdieCell> cells;
  if (masked) {
    cells = edie_cells(restrict_to_fov(diagram), grid);
  } else {
    cells = edie_cells(diagram, grid);
  }

  core::DensityMatrix out(grid);
  const double area = grid.dx() * grid.dt();
  const double f = static_cast<double>(core::camera_facing(diagram));
  for (std::size_t ix = 0; ix < grid.alpha(); ++ix) {
    for (std::size_t it = 0; it < grid.beta(); ++it) {
      bool observed = true;
      if (masked) {
        // The FOV band intersects cell [x0,x1] at time t when the camera
        // position lies in an interval derived from the band geometry.
        const double x0 = ix * grid.dx();
        const double x1 = x0 + grid.dx();
        const double t0 = it * grid.dt();
        const double t1 = t0 + grid.dt();
        const auto [cam_lo, cam_hi] = camera_range(diagram.camera, t0, t1);
        double need_lo, need_hi;
        if (f < 0) {
          need_lo = x0 + diagram.fov.near;
          need_hi = x1 + diagram.fov.far;
        } else {
          need_lo = x0 - diagram.fov.far;
          need_hi = x1 - diagram.fov.near;
        }
        observed = cam_hi >= need_lo && cam_lo <= need_hi;
      }
      if (observed) {
        out.set(ix, it, cells[ix * grid.beta() + it].time / area);
      }
    }
  }
  return out;
}

std::vector<core::Quartet> extract_quartets(
    const std::vector<core::DensityMatrix>& matrices) {
  std::vector<core::Quartet> quartets;
  for (const auto& m : matrices) {
    if (!matrices.empty() && !(m.grid() == matrices.front().grid())) {
      throw ConfigError("extract_quartets: matrices must share one grid");
    }
    for (std::size_t it = 0; it + 1 < m.beta(); ++it) {
      for (std::size_t ix = 1; ix + 1 < m.alpha(); ++ix) {
        if (m.observed(ix - 1, it) && m.observed(ix, it) &&
            m.observed(ix + 1, it) && m.observed(ix, it + 1)) {
          quartets.push_back({m.at(ix - 1, it), m.at(ix, it), m.at(ix + 1, it),
                              m.at(ix, it + 1)});
        }
      }
    }
  }
  return quartets;
}

}  // namespace tse::discretize
