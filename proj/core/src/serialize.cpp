#include "tse/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tse::serialize {

namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ',')) fields.push_back(field);
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    if (!out.good()) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void save_matrix(const core::DensityMatrix& matrix,
                 const std::filesystem::path& values_path,
                 const std::filesystem::path& mask_path) {
  std::ostringstream values, mask;
  for (std::size_t ix = 0; ix < matrix.alpha(); ++ix) {
    for (std::size_t it = 0; it < matrix.beta(); ++it) {
      if (it > 0) {
        values << ',';
        mask << ',';
      }
      if (matrix.observed(ix, it)) {
        values << format_double(matrix.at(ix, it));
        mask << '1';
      } else {
        values << "nan";
        mask << '0';
      }
    }
    values << '\n';
    mask << '\n';
  }
  write_atomic(values_path, values.str());
  write_atomic(mask_path, mask.str());
}

core::DensityMatrix load_matrix(const core::GridSpec& grid,
                                const std::filesystem::path& values_path,
                                const std::filesystem::path& mask_path) {
  const auto values = read_csv(values_path);
  const auto mask = read_csv(mask_path);
  if (values.size() != grid.alpha() || mask.size() != grid.alpha()) {
    throw IoError("matrix file " + values_path.string() + ": row count mismatch");
  }
  core::DensityMatrix out(grid);
  for (std::size_t ix = 0; ix < grid.alpha(); ++ix) {
    if (values[ix].size() != grid.beta() || mask[ix].size() != grid.beta()) {
      throw IoError("matrix file " + values_path.string() + ": column count mismatch");
    }
    for (std::size_t it = 0; it < grid.beta(); ++it) {
      if (mask[ix][it] == "1") {
        out.set(ix, it, std::stod(values[ix][it]));
      }
    }
  }
  return out;
}

void save_calibration(const calibrate::CalibrationResult& result,
                      const std::filesystem::path& path) {
  json j;
  j["fd"] = {{"v_f", result.fd.v_f()},
             {"k_c", result.fd.k_c()},
             {"k_j", result.fd.k_j()},
             {"w_c", result.fd.w_c()}};
  j["rmse"] = result.rmse;
  j["trace"] = result.ga_trace;
  write_atomic(path, j.dump(2) + "\n");
}

calibrate::CalibrationResult load_calibration(const std::filesystem::path& path) {
  const json j = json::parse(slurp(path));
  core::FDParams fd(j.at("fd").at("v_f").get<double>(),
                    j.at("fd").at("k_c").get<double>(),
                    j.at("fd").at("k_j").get<double>());
  calibrate::CalibrationResult result{fd, j.at("rmse").get<double>(), {}};
  if (j.contains("trace")) {
    result.ga_trace = j.at("trace").get<std::vector<double>>();
  }
  return result;
}

void save_search_table(const gridsearch::SearchTable& table,
                       const std::filesystem::path& path) {
  std::ostringstream os;
  for (const auto& name : table.axis_names) {
    if (name == "mutation") {
      os << "mutation_low,mutation_high,";
    } else {
      os << name << ',';
    }
  }
  os << "fitness\n";
  for (const auto& row : table.rows) {
    for (const auto& v : row.point) {
      os << format_double(v.a) << ',';
      if (v.is_pair) os << format_double(v.b) << ',';
    }
    os << format_double(row.fitness) << '\n';
  }
  write_atomic(path, os.str());
}

void save_report_csv(const evaluate::EvalReport& report,
                     const std::filesystem::path& path) {
  std::ostringstream os;
  os << "scenario,rmse_ga,rmse_baseline,mean_density,camera_speed\n";
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    os << i << ',' << format_double(r.rmse_ga) << ','
       << format_double(r.rmse_baseline) << ',' << format_double(r.mean_density)
       << ',' << format_double(r.camera_speed) << '\n';
  }
  write_atomic(path, os.str());
}

void save_report_summary(const evaluate::EvalReport& report,
                         const std::filesystem::path& path) {
  json j;
  j["scenarios"] = report.rows.size();
  j["ga"] = {{"mean_rmse", report.ga_mean}, {"std_rmse", report.ga_std}};
  j["baseline"] = {{"mean_rmse", report.baseline_mean},
                   {"std_rmse", report.baseline_std}};
  auto fit_json = [](const evaluate::RegressionFit& f) {
    return json{{"slope", f.slope},
                {"intercept", f.intercept},
                {"correlation", f.correlation}};
  };
  j["ga_vs_density"] = fit_json(report.ga_vs_density);
  j["ga_vs_camera_speed"] = fit_json(report.ga_vs_camera_speed);
  j["baseline_vs_density"] = fit_json(report.baseline_vs_density);
  j["baseline_vs_camera_speed"] = fit_json(report.baseline_vs_camera_speed);
  write_atomic(path, j.dump(2) + "\n");
}

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 420;
constexpr int kMargin = 50;

std::string svg_open(const std::string& title) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
     << "\" height=\"" << kHeight << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        "font-family=\"sans-serif\" font-size=\"14\">"
     << title << "</text>\n";
  return os.str();
}

}  // namespace

void save_histogram_svg(const std::vector<double>& ga_values,
                        const std::vector<double>& baseline_values,
                        const std::string& title,
                        const std::filesystem::path& path) {
  double hi = 1e-12;
  for (double v : ga_values) hi = std::max(hi, v);
  for (double v : baseline_values) hi = std::max(hi, v);
  constexpr int kBins = 20;
  std::vector<int> ga_bins(kBins, 0), base_bins(kBins, 0);
  auto binify = [&](const std::vector<double>& vals, std::vector<int>& bins) {
    for (double v : vals) {
      bins[std::min(kBins - 1, static_cast<int>(v / hi * kBins))]++;
    }
  };
  binify(ga_values, ga_bins);
  binify(baseline_values, base_bins);
  int max_count = 1;
  for (int c : ga_bins) max_count = std::max(max_count, c);
  for (int c : base_bins) max_count = std::max(max_count, c);

  std::ostringstream os;
  os << svg_open(title);
  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  const double bar_w = plot_w / kBins;
  for (int b = 0; b < kBins; ++b) {
    const double x = kMargin + b * bar_w;
    const double hg = plot_h * ga_bins[b] / max_count;
    const double hb = plot_h * base_bins[b] / max_count;
    os << "<rect x=\"" << x << "\" y=\"" << kHeight - kMargin - hb
       << "\" width=\"" << bar_w * 0.45 << "\" height=\"" << hb
       << "\" fill=\"steelblue\"/>\n";
    os << "<rect x=\"" << x + bar_w * 0.45 << "\" y=\"" << kHeight - kMargin - hg
       << "\" width=\"" << bar_w * 0.45 << "\" height=\"" << hg
       << "\" fill=\"indianred\"/>\n";
  }
  os << "<text x=\"" << kMargin << "\" y=\"" << kHeight - 12
     << "\" font-family=\"sans-serif\" font-size=\"12\">0</text>\n"
     << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
     << format_double(hi) << "</text>\n"
     << "<text x=\"" << kWidth - kMargin << "\" y=\"36\" text-anchor=\"end\" "
        "font-family=\"sans-serif\" font-size=\"12\" fill=\"indianred\">GA"
        "</text>\n"
     << "<text x=\"" << kWidth - kMargin - 40 << "\" y=\"36\" text-anchor=\"end\" "
        "font-family=\"sans-serif\" font-size=\"12\" fill=\"steelblue\">baseline"
        "</text>\n"
     << "</svg>\n";
  write_atomic(path, os.str());
}

void save_scatter_svg(const std::vector<double>& x, const std::vector<double>& y,
                      const evaluate::RegressionFit& fit,
                      const std::string& x_label, const std::string& y_label,
                      const std::filesystem::path& path) {
  if (x.empty() || x.size() != y.size()) {
    throw ConfigError("save_scatter_svg: bad input sizes");
  }
  double x_lo = x[0], x_hi = x[0], y_lo = y[0], y_hi = y[0];
  for (std::size_t i = 0; i < x.size(); ++i) {
    x_lo = std::min(x_lo, x[i]);
    x_hi = std::max(x_hi, x[i]);
    y_lo = std::min(y_lo, y[i]);
    y_hi = std::max(y_hi, y[i]);
  }
  if (x_hi == x_lo) x_hi = x_lo + 1.0;
  if (y_hi == y_lo) y_hi = y_lo + 1.0;
  auto px = [&](double v) {
    return kMargin + (v - x_lo) / (x_hi - x_lo) * (kWidth - 2.0 * kMargin);
  };
  auto py = [&](double v) {
    return kHeight - kMargin - (v - y_lo) / (y_hi - y_lo) * (kHeight - 2.0 * kMargin);
  };

  std::ostringstream os;
  os << svg_open(y_label + " vs " + x_label +
                 " (r = " + format_double(fit.correlation) + ")");
  for (std::size_t i = 0; i < x.size(); ++i) {
    os << "<circle cx=\"" << px(x[i]) << "\" cy=\"" << py(y[i])
       << "\" r=\"3\" fill=\"indianred\"/>\n";
  }
  const double fy0 = fit.intercept + fit.slope * x_lo;
  const double fy1 = fit.intercept + fit.slope * x_hi;
  os << "<line x1=\"" << px(x_lo) << "\" y1=\"" << py(std::clamp(fy0, y_lo, y_hi))
     << "\" x2=\"" << px(x_hi) << "\" y2=\"" << py(std::clamp(fy1, y_lo, y_hi))
     << "\" stroke=\"black\" stroke-dasharray=\"4\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
     << x_label << "</text>\n"
     << "</svg>\n";
  write_atomic(path, os.str());
}

}  // namespace tse::serialize
