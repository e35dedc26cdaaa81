#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "tse/errors.hpp"

namespace tse::core {

/// Uniform space-time discretization of one link: length L split into
/// alpha cells of size dx, horizon T split into beta steps of size dt.
/// L/dx and T/dt must divide exactly; alpha >= 3 and beta >= 2.
class GridSpec {
 public:
  GridSpec(double link_length, double total_time, double dx, double dt);

  double link_length() const { return link_length_; }
  double total_time() const { return total_time_; }
  double dx() const { return dx_; }
  double dt() const { return dt_; }
  std::size_t alpha() const { return alpha_; }
  std::size_t beta() const { return beta_; }

  /// dt/dx, the factor converting interface flow to a density increment.
  double step_ratio() const { return dt_ / dx_; }
  /// CFL speed limit dx/dt.
  double max_speed() const { return dx_ / dt_; }

  bool operator==(const GridSpec& o) const = default;

 private:
  double link_length_;
  double total_time_;
  double dx_;
  double dt_;
  std::size_t alpha_;
  std::size_t beta_;
};

/// Triangular fundamental diagram: free-flow branch of slope v_f up to the
/// capacity point (k_c, v_f*k_c), congested branch dropping to zero at k_j
/// with backward wave speed w_c = v_f*k_c / (k_j - k_c).
class FDParams {
 public:
  FDParams(double v_f, double k_c, double k_j);

  double v_f() const { return v_f_; }
  double k_c() const { return k_c_; }
  double k_j() const { return k_j_; }
  double w_c() const { return w_c_; }
  double capacity() const { return v_f_ * k_c_; }

  /// Throws ConfigError unless v_f <= dx/dt for this grid.
  void require_cfl(const GridSpec& grid) const;

 private:
  double v_f_;
  double k_c_;
  double k_j_;
  double w_c_;
};

struct TrajectorySample {
  double t = 0.0;  // seconds
  double x = 0.0;  // meters along the link
};

/// One vehicle's sampled path along the link. Samples are strictly
/// increasing in time; positions are clipped to [0, L] at ingestion.
struct Trajectory {
  std::string vehicle_id;
  std::vector<TrajectorySample> samples;

  bool empty() const { return samples.empty(); }
  double start_time() const { return samples.front().t; }
  double end_time() const { return samples.back().t; }

  /// Linear interpolation; clamps outside the sampled time range.
  double position_at(double t) const;
};

struct Fov {
  double near = 0.0;
  double far = 0.0;
};

/// All trajectories of one camera run: opposite-lane vehicles, the camera
/// path itself and the field-of-view band the camera can resolve.
struct SpaceTimeDiagram {
  GridSpec grid;
  std::vector<Trajectory> vehicles;
  Trajectory camera;
  Fov fov;
};

/// +1 if the camera travels toward increasing x, -1 otherwise.
int camera_facing(const SpaceTimeDiagram& diagram);

/// Signed distance from camera to (t, x) along the camera-facing direction.
double camera_distance(const SpaceTimeDiagram& diagram, double t, double x);

/// True when (t, x) lies inside the camera's field of view band.
bool in_fov(const SpaceTimeDiagram& diagram, double t, double x);

/// alpha x beta grid of cell densities plus an observed mask. Unobserved
/// cells hold no density value (reading one throws).
class DensityMatrix {
 public:
  explicit DensityMatrix(const GridSpec& grid);

  const GridSpec& grid() const { return grid_; }
  std::size_t alpha() const { return grid_.alpha(); }
  std::size_t beta() const { return grid_.beta(); }

  bool observed(std::size_t ix, std::size_t it) const {
    return observed_[index(ix, it)];
  }
  double at(std::size_t ix, std::size_t it) const;
  void set(std::size_t ix, std::size_t it, double density);
  void set_unobserved(std::size_t ix, std::size_t it);

  std::size_t observed_count() const;
  bool fully_observed() const;

  std::size_t index(std::size_t ix, std::size_t it) const {
    return ix * grid_.beta() + it;
  }

 private:
  GridSpec grid_;
  std::vector<double> cells_;
  std::vector<std::uint8_t> observed_;
};

/// The four observed densities one CTM update relates: upstream, self and
/// downstream at time t, plus self at t + dt.
struct Quartet {
  double k_up = 0.0;
  double k_mid = 0.0;
  double k_down = 0.0;
  double k_next = 0.0;
};

/// Boundary data for one CTM rollout: initial column of alpha densities
/// plus per-step inflow/outflow densities at the link ends.
struct BoundaryVector {
  std::vector<double> init;     // alpha entries, k(x, 0)
  std::vector<double> inflow;   // beta entries, upstream sending density
  std::vector<double> outflow;  // beta entries, downstream receiving density

  std::size_t gene_count() const {
    return init.size() + inflow.size() + outflow.size();
  }
  std::vector<double> flatten() const;
  static BoundaryVector unflatten(const std::vector<double>& genes,
                                  const GridSpec& grid);
};

/// Triangular-FD interface flow: min of upstream demand k_sending*v_f and
/// downstream supply w_c*(k_j - k_receiving).
double flow(const FDParams& fd, double k_sending, double k_receiving);

/// One explicit CTM update of a full row of cell densities. The boundary
/// inflow density acts as a virtual upstream cell's sending density, the
/// outflow density as a virtual downstream cell's receiving density.
/// Result is clamped to [0, k_j].
std::vector<double> ctm_step(const FDParams& fd, const GridSpec& grid,
                             const std::vector<double>& row,
                             double inflow_density, double outflow_density);

/// Rolls the CTM forward from a boundary vector; column 0 is bv.init,
/// column j+1 = ctm_step(column j, bv.inflow[j], bv.outflow[j]).
/// Output is fully observed.
DensityMatrix ctm_run(const FDParams& fd, const GridSpec& grid,
                      const BoundaryVector& bv);

}  // namespace tse::core
