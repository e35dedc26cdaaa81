#include "tse/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace tse::ingest {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

struct RawSample {
  double t;
  double x;
  std::size_t line_no;
};

}  // namespace

std::vector<core::SpaceTimeDiagram> load_runs(const std::filesystem::path& path,
                                              const core::GridSpec& grid,
                                              const core::Fov& fov) {
  std::ifstream in(path);
  if (!in) throw IoError("ingest: cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw IoError("ingest: empty file " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv(line);
  const std::vector<std::string> expected = {"run_id", "vehicle_id", "role", "t", "x"};
  if (header.size() != expected.size()) {
    throw IoError("ingest: header must be '" + std::string(kCsvHeader) + "'");
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (header[i] != expected[i]) {
      throw IoError("ingest: unknown column '" + header[i] + "' (expected '" +
                    expected[i] + "')");
    }
  }

  // run_id -> (vehicle_id:role) -> samples
  std::map<std::string, std::map<std::pair<std::string, std::string>,
                                 std::vector<RawSample>>>
      runs;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 5) {
      throw IoError("ingest: line " + std::to_string(line_no) +
                    ": expected 5 fields, got " + std::to_string(fields.size()));
    }
    const std::string& role = fields[2];
    if (role != "vehicle" && role != "camera") {
      throw IoError("ingest: line " + std::to_string(line_no) +
                    ": unknown role '" + role + "'");
    }
    double t, x;
    try {
      t = std::stod(fields[3]);
      x = std::stod(fields[4]);
    } catch (const std::exception&) {
      throw IoError("ingest: line " + std::to_string(line_no) +
                    ": malformed number");
    }
    if (t < 0.0) {
      throw IoError("ingest: line " + std::to_string(line_no) +
                    ": negative timestamp");
    }
    x = std::clamp(x, 0.0, grid.link_length());
    runs[fields[0]][{role, fields[1]}].push_back({t, x, line_no});
  }

  std::vector<core::SpaceTimeDiagram> out;
  for (auto& [run_id, streams] : runs) {
    core::SpaceTimeDiagram d{grid, {}, {}, fov};
    bool has_camera = false;
    for (auto& [key, samples] : streams) {
      std::stable_sort(samples.begin(), samples.end(),
                       [](const RawSample& a, const RawSample& b) { return a.t < b.t; });
      for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        if (!(samples[i + 1].t > samples[i].t)) {
          throw IoError("ingest: line " + std::to_string(samples[i + 1].line_no) +
                        ": non-monotone timestamp for " + key.first + " '" +
                        key.second + "' in run '" + run_id + "'");
        }
      }
      core::Trajectory traj;
      traj.vehicle_id = key.second;
      for (const auto& s : samples) traj.samples.push_back({s.t, s.x});
      if (key.first == "camera") {
        if (has_camera) {
          throw IoError("ingest: run '" + run_id + "' has more than one camera");
        }
        d.camera = std::move(traj);
        has_camera = true;
      } else {
        d.vehicles.push_back(std::move(traj));
      }
    }
    if (!has_camera) {
      throw IoError("ingest: run '" + run_id + "' is missing a camera stream");
    }
    out.push_back(std::move(d));
  }
  return out;
}

void save_runs(const std::vector<core::SpaceTimeDiagram>& diagrams,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("ingest: cannot write " + path.string());
  out << kCsvHeader << '\n';
  for (std::size_t i = 0; i < diagrams.size(); ++i) {
    char run_id[16];
    std::snprintf(run_id, sizeof(run_id), "run%04zu", i);
    const auto& d = diagrams[i];
    // Canonical ordering: role "camera" sorts before "vehicle".
    for (const auto& s : d.camera.samples) {
      out << run_id << ",camera,camera," << format_double(s.t) << ','
          << format_double(s.x) << '\n';
    }
    std::vector<const core::Trajectory*> vehicles;
    for (const auto& v : d.vehicles) vehicles.push_back(&v);
    std::sort(vehicles.begin(), vehicles.end(),
              [](const core::Trajectory* a, const core::Trajectory* b) {
                return a->vehicle_id < b->vehicle_id;
              });
    for (const auto* v : vehicles) {
      for (const auto& s : v->samples) {
        out << run_id << ',' << v->vehicle_id << ",vehicle,"
            << format_double(s.t) << ',' << format_double(s.x) << '\n';
      }
    }
  }
  if (!out.good()) throw IoError("ingest: write failed for " + path.string());
}

}  // namespace tse::ingest
