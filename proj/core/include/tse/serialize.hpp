#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tse/calibrate.hpp"
#include "tse/core.hpp"
#include "tse/evaluate.hpp"
#include "tse/gridsearch.hpp"

namespace tse::serialize {

/// Writes `content` to path via a temp file + rename, so re-runs either
/// fully replace the artifact or leave the previous one intact.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string format_double(double v);  // 9 significant digits

/// Density matrix as CSV of alpha rows x beta columns (unobserved -> nan)
/// plus a parallel 1/0 mask CSV.
void save_matrix(const core::DensityMatrix& matrix,
                 const std::filesystem::path& values_path,
                 const std::filesystem::path& mask_path);
core::DensityMatrix load_matrix(const core::GridSpec& grid,
                                const std::filesystem::path& values_path,
                                const std::filesystem::path& mask_path);

void save_calibration(const calibrate::CalibrationResult& result,
                      const std::filesystem::path& path);
calibrate::CalibrationResult load_calibration(const std::filesystem::path& path);

void save_search_table(const gridsearch::SearchTable& table,
                       const std::filesystem::path& path);

void save_report_csv(const evaluate::EvalReport& report,
                     const std::filesystem::path& path);
void save_report_summary(const evaluate::EvalReport& report,
                         const std::filesystem::path& path);

/// Minimal static SVG renderings; no plotting dependency.
void save_histogram_svg(const std::vector<double>& ga_values,
                        const std::vector<double>& baseline_values,
                        const std::string& title,
                        const std::filesystem::path& path);
void save_scatter_svg(const std::vector<double>& x, const std::vector<double>& y,
                      const evaluate::RegressionFit& fit,
                      const std::string& x_label, const std::string& y_label,
                      const std::filesystem::path& path);

}  // namespace tse::serialize
