#include "tse/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tse::evaluate {

namespace {

double interval_extreme_cam(const core::Trajectory& camera, double t0, double t1,
                            bool want_max) {
  double ext = camera.position_at(t0);
  const double p1 = camera.position_at(t1);
  ext = want_max ? std::max(ext, p1) : std::min(ext, p1);
  for (const auto& s : camera.samples) {
    if (s.t > t0 && s.t < t1) {
      ext = want_max ? std::max(ext, s.x) : std::min(ext, s.x);
    }
  }
  return ext;
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return std::sqrt(s / static_cast<double>(v.size()));
}

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::size_t EvalMask::count() const {
  std::size_t n = 0;
  for (auto i : included) n += i;
  return n;
}

EvalMask camera_mask(const core::SpaceTimeDiagram& diagram,
                     const core::GridSpec& grid) {
  const int facing = core::camera_facing(diagram);
  EvalMask mask;
  mask.alpha = grid.alpha();
  mask.beta = grid.beta();
  mask.included.assign(mask.alpha * mask.beta, 0);
  for (std::size_t ix = 0; ix < mask.alpha; ++ix) {
    const double x0 = ix * grid.dx();
    const double x1 = x0 + grid.dx();
    for (std::size_t it = 0; it < mask.beta; ++it) {
      const double t0 = it * grid.dt();
      const double t1 = t0 + grid.dt();
      bool swept;
      if (facing < 0) {
        // Camera descends; a point is swept once the camera is below it.
        swept = interval_extreme_cam(diagram.camera, t0, t1, true) <= x0;
      } else {
        swept = interval_extreme_cam(diagram.camera, t0, t1, false) >= x1;
      }
      mask.included[ix * mask.beta + it] = swept ? 1 : 0;
    }
  }
  return mask;
}

double masked_rmse(const core::DensityMatrix& truth,
                   const core::DensityMatrix& estimate, const EvalMask& mask) {
  if (truth.alpha() != estimate.alpha() || truth.beta() != estimate.beta() ||
      truth.alpha() != mask.alpha || truth.beta() != mask.beta) {
    throw ConfigError("masked_rmse: shape mismatch");
  }
  double sum_sq = 0.0;
  std::size_t n = 0;
  for (std::size_t ix = 0; ix < mask.alpha; ++ix) {
    for (std::size_t it = 0; it < mask.beta; ++it) {
      if (!mask.at(ix, it)) continue;
      const double e = truth.at(ix, it) - estimate.at(ix, it);
      sum_sq += e * e;
      ++n;
    }
  }
  if (n == 0) throw ConfigError("masked_rmse: empty mask");
  return std::sqrt(sum_sq / static_cast<double>(n));
}

RegressionFit trend_regression(const std::vector<double>& x,
                               const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size() || n < 3) throw ConfigError("trend_regression: need >= 3 points");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw ConfigError("trend_regression: x has zero variance");

  RegressionFit fit;
  fit.correlation = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;

  // IRLS with Huber weights; start from OLS.
  double slope = sxy / sxx;
  double intercept = my - slope * mx;
  std::vector<double> r(n), w(n, 1.0);
  for (int iter = 0; iter < 200; ++iter) {
    for (std::size_t i = 0; i < n; ++i) r[i] = y[i] - slope * x[i] - intercept;
    std::vector<double> abs_dev(n);
    const double med = median_of(r);
    for (std::size_t i = 0; i < n; ++i) abs_dev[i] = std::abs(r[i] - med);
    const double scale = 1.4826 * median_of(abs_dev);
    if (scale <= 1e-15) break;  // perfect fit
    const double delta = 1.345 * scale;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = std::abs(r[i]);
      w[i] = a <= delta ? 1.0 : delta / a;
    }
    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sw += w[i];
      swx += w[i] * x[i];
      swy += w[i] * y[i];
      swxx += w[i] * x[i] * x[i];
      swxy += w[i] * x[i] * y[i];
    }
    const double den = sw * swxx - swx * swx;
    if (std::abs(den) < 1e-30) break;
    const double new_slope = (sw * swxy - swx * swy) / den;
    const double new_intercept = (swy - new_slope * swx) / sw;
    const double change =
        std::abs(new_slope - slope) + std::abs(new_intercept - intercept);
    slope = new_slope;
    intercept = new_intercept;
    if (change < 1e-8) break;
  }
  fit.slope = slope;
  fit.intercept = intercept;
  return fit;
}

EvalReport batch_report(const std::vector<ScenarioEval>& scenarios) {
  if (scenarios.empty()) throw ConfigError("batch_report: no scenarios");
  EvalReport report;
  std::vector<double> ga, base, dens, speed;
  for (const auto& s : scenarios) {
    ScenarioRow row;
    row.rmse_ga = masked_rmse(s.truth, s.estimated, s.mask);
    row.rmse_baseline = masked_rmse(s.truth, s.baseline, s.mask);
    row.mean_density = s.mean_density;
    row.camera_speed = s.camera_speed;
    report.rows.push_back(row);
    ga.push_back(row.rmse_ga);
    base.push_back(row.rmse_baseline);
    dens.push_back(row.mean_density);
    speed.push_back(row.camera_speed);
  }
  report.ga_mean = mean_of(ga);
  report.ga_std = std_of(ga, report.ga_mean);
  report.baseline_mean = mean_of(base);
  report.baseline_std = std_of(base, report.baseline_mean);
  if (scenarios.size() >= 3) {
    report.ga_vs_density = trend_regression(dens, ga);
    report.ga_vs_camera_speed = trend_regression(speed, ga);
    report.baseline_vs_density = trend_regression(dens, base);
    report.baseline_vs_camera_speed = trend_regression(speed, base);
  }
  return report;
}

}  // namespace tse::evaluate
