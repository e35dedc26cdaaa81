#include "tse/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace tse::core {

namespace {

std::size_t exact_cell_count(double extent, double cell, const char* what) {
  const double ratio = extent / cell;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream os;
    os << "grid: " << what << " (" << extent << ") is not an integer multiple of cell size " << cell;
    throw ConfigError(os.str());
  }
  return static_cast<std::size_t>(rounded);
}

}  // namespace

GridSpec::GridSpec(double link_length, double total_time, double dx, double dt)
    : link_length_(link_length), total_time_(total_time), dx_(dx), dt_(dt) {
  if (link_length <= 0 || total_time <= 0 || dx <= 0 || dt <= 0) {
    throw ConfigError("grid: L, T, dx, dt must all be positive");
  }
  alpha_ = exact_cell_count(link_length, dx, "link length");
  beta_ = exact_cell_count(total_time, dt, "total time");
  if (alpha_ < 3) throw ConfigError("grid: need at least 3 space cells");
  if (beta_ < 2) throw ConfigError("grid: need at least 2 time cells");
}

FDParams::FDParams(double v_f, double k_c, double k_j)
    : v_f_(v_f), k_c_(k_c), k_j_(k_j) {
  if (!(v_f > 0)) throw ConfigError("fd: v_f must be positive");
  if (!(k_j > 0)) throw ConfigError("fd: k_j must be positive");
  if (!(k_c > 0 && k_c < k_j / 2)) {
    std::ostringstream os;
    os << "fd: k_c (" << k_c << ") must lie in (0, k_j/2) with k_j = " << k_j;
    throw ConfigError(os.str());
  }
  w_c_ = v_f_ * k_c_ / (k_j_ - k_c_);
}

void FDParams::require_cfl(const GridSpec& grid) const {
  if (v_f_ > grid.max_speed() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "fd: v_f = " << v_f_ << " violates CFL bound dx/dt = " << grid.max_speed();
    throw ConfigError(os.str());
  }
}

double Trajectory::position_at(double t) const {
  if (samples.empty()) throw DomainError("trajectory: no samples");
  if (t <= samples.front().t) return samples.front().x;
  if (t >= samples.back().t) return samples.back().x;
  auto it = std::lower_bound(
      samples.begin(), samples.end(), t,
      [](const TrajectorySample& s, double tt) { return s.t < tt; });
  const auto& b = *it;
  const auto& a = *(it - 1);
  const double w = (t - a.t) / (b.t - a.t);
  return a.x + w * (b.x - a.x);
}

int camera_facing(const SpaceTimeDiagram& diagram) {
  if (diagram.camera.samples.size() < 2) return -1;
  return diagram.camera.samples.back().x >= diagram.camera.samples.front().x ? 1 : -1;
}

double camera_distance(const SpaceTimeDiagram& diagram, double t, double x) {
  const double cam = diagram.camera.position_at(t);
  return static_cast<double>(camera_facing(diagram)) * (x - cam);
}

bool in_fov(const SpaceTimeDiagram& diagram, double t, double x) {
  const double d = camera_distance(diagram, t, x);
  return d >= diagram.fov.near && d <= diagram.fov.far;
}

DensityMatrix::DensityMatrix(const GridSpec& grid)
    : grid_(grid),
      cells_(grid.alpha() * grid.beta(), std::numeric_limits<double>::quiet_NaN()),
      observed_(grid.alpha() * grid.beta(), 0) {}

double DensityMatrix::at(std::size_t ix, std::size_t it) const {
  const std::size_t i = index(ix, it);
  if (!observed_[i]) {
    std::ostringstream os;
    os << "matrix: cell (" << ix << ", " << it << ") is unobserved";
    throw DomainError(os.str());
  }
  return cells_[i];
}

void DensityMatrix::set(std::size_t ix, std::size_t it, double density) {
  const std::size_t i = index(ix, it);
  cells_[i] = density;
  observed_[i] = 1;
}

void DensityMatrix::set_unobserved(std::size_t ix, std::size_t it) {
  const std::size_t i = index(ix, it);
  cells_[i] = std::numeric_limits<double>::quiet_NaN();
  observed_[i] = 0;
}

std::size_t DensityMatrix::observed_count() const {
  std::size_t n = 0;
  for (auto o : observed_) n += o;
  return n;
}

bool DensityMatrix::fully_observed() const {
  return observed_count() == observed_.size();
}

std::vector<double> BoundaryVector::flatten() const {
  std::vector<double> genes;
  genes.reserve(gene_count());
  genes.insert(genes.end(), init.begin(), init.end());
  genes.insert(genes.end(), inflow.begin(), inflow.end());
  genes.insert(genes.end(), outflow.begin(), outflow.end());
  return genes;
}

BoundaryVector BoundaryVector::unflatten(const std::vector<double>& genes,
                                         const GridSpec& grid) {
  const std::size_t a = grid.alpha();
  const std::size_t b = grid.beta();
  if (genes.size() != a + 2 * b) {
    throw ConfigError("boundary vector: gene count does not match grid");
  }
  BoundaryVector bv;
  bv.init.assign(genes.begin(), genes.begin() + a);
  bv.inflow.assign(genes.begin() + a, genes.begin() + a + b);
  bv.outflow.assign(genes.begin() + a + b, genes.end());
  return bv;
}

double flow(const FDParams& fd, double k_sending, double k_receiving) {
  if (k_sending < 0 || k_sending > fd.k_j() || k_receiving < 0 || k_receiving > fd.k_j()) {
    std::ostringstream os;
    os << "flow: densities (" << k_sending << ", " << k_receiving
       << ") outside [0, " << fd.k_j() << "]";
    throw DomainError(os.str());
  }
  return std::min(k_sending * fd.v_f(), fd.w_c() * (fd.k_j() - k_receiving));
}

std::vector<double> ctm_step(const FDParams& fd, const GridSpec& grid,
                             const std::vector<double>& row,
                             double inflow_density, double outflow_density) {
  fd.require_cfl(grid);
  const std::size_t n = grid.alpha();
  if (row.size() != n) throw ConfigError("ctm_step: row size does not match grid");

  // Interface flows q[0..n]; q[i] crosses the boundary upstream of cell i.
  std::vector<double> q(n + 1);
  q[0] = flow(fd, inflow_density, row[0]);
  for (std::size_t i = 1; i < n; ++i) q[i] = flow(fd, row[i - 1], row[i]);
  q[n] = flow(fd, row[n - 1], outflow_density);

  const double r = grid.step_ratio();
  std::vector<double> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    next[i] = std::clamp(row[i] + r * (q[i] - q[i + 1]), 0.0, fd.k_j());
  }
  return next;
}

DensityMatrix ctm_run(const FDParams& fd, const GridSpec& grid,
                      const BoundaryVector& bv) {
  const std::size_t a = grid.alpha();
  const std::size_t b = grid.beta();
  if (bv.init.size() != a || bv.inflow.size() != b || bv.outflow.size() != b) {
    throw ConfigError("ctm_run: boundary vector does not match grid");
  }
  DensityMatrix out(grid);
  std::vector<double> col = bv.init;
  for (std::size_t i = 0; i < a; ++i) out.set(i, 0, col[i]);
  for (std::size_t j = 0; j + 1 < b; ++j) {
    col = ctm_step(fd, grid, col, bv.inflow[j], bv.outflow[j]);
    for (std::size_t i = 0; i < a; ++i) out.set(i, j + 1, col[i]);
  }
  return out;
}

}  // namespace tse::core
