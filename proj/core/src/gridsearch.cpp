#include "tse/gridsearch.hpp"

#include <algorithm>
#include <functional>

namespace tse::gridsearch {

namespace {

void apply_axis(ga::GAConfig& config, const std::string& name,
                const AxisValue& value) {
  if (name == "generations") {
    config.generations = static_cast<int>(value.a);
  } else if (name == "k_tournament") {
    config.k_tournament = static_cast<int>(value.a);
  } else if (name == "population") {
    config.population_size = static_cast<int>(value.a);
  } else if (name == "crossover_pairs") {
    config.crossover_pairs = static_cast<int>(value.a);
  } else if (name == "mutation") {
    config.p_low_fitness = value.a;
    config.p_high_fitness = value.b;
  } else {
    throw ConfigError("gridsearch: unknown axis '" + name + "'");
  }
}

std::size_t lattice_size(const SearchSpec& spec) {
  if (spec.axes.empty()) throw ConfigError("gridsearch: no axes");
  std::size_t n = 1;
  for (const auto& axis : spec.axes) {
    if (axis.values.empty()) {
      throw ConfigError("gridsearch: axis '" + axis.name + "' has no values");
    }
    n *= axis.values.size();
  }
  if (n > spec.max_points) {
    throw ConfigError("gridsearch: lattice of " + std::to_string(n) +
                      " points exceeds cap " + std::to_string(spec.max_points));
  }
  return n;
}

SearchTable run_search(
    const SearchSpec& spec,
    const std::function<double(const ga::GAConfig&, int repeats)>& run_point) {
  const std::size_t total = lattice_size(spec);
  SearchTable table;
  for (const auto& axis : spec.axes) table.axis_names.push_back(axis.name);

  for (std::size_t index = 0; index < total; ++index) {
    ga::GAConfig config = spec.base;
    std::vector<AxisValue> point;
    std::size_t rem = index;
    for (auto it = spec.axes.rbegin(); it != spec.axes.rend(); ++it) {
      const std::size_t vi = rem % it->values.size();
      rem /= it->values.size();
      point.insert(point.begin(), it->values[vi]);
    }
    for (std::size_t a = 0; a < spec.axes.size(); ++a) {
      apply_axis(config, spec.axes[a].name, point[a]);
    }
    if (spec.crossover_half_population) {
      config.crossover_pairs = config.population_size / 2;
    }
    config.rng_seed = spec.rng_seed + index * 1000003ull;
    table.rows.push_back({std::move(point), run_point(config, spec.repetitions)});
  }

  std::stable_sort(table.rows.begin(), table.rows.end(),
                   [](const SearchRow& a, const SearchRow& b) {
                     return a.fitness > b.fitness;
                   });
  return table;
}

}  // namespace

SearchTable search_fd(const std::vector<core::Quartet>& quartets,
                      const core::GridSpec& grid, double k_j,
                      const SearchSpec& spec) {
  if (quartets.empty()) throw ConfigError("search_fd: no quartets");
  return run_search(spec, [&](const ga::GAConfig& config, int repeats) {
    return -calibrate::calibrate_fd(quartets, grid, k_j, config, repeats).rmse;
  });
}

SearchTable search_boundary(const std::vector<core::DensityMatrix>& partials,
                            const core::FDParams& fd, const SearchSpec& spec) {
  if (partials.empty()) throw ConfigError("search_boundary: no diagrams");
  return run_search(spec, [&](const ga::GAConfig& config, int repeats) {
    double sum = 0.0;
    for (const auto& partial : partials) {
      sum += estimate::estimate_density(partial, fd, config, repeats).fitness;
    }
    return sum / static_cast<double>(partials.size());
  });
}

SearchSpec fd_search_spec(std::uint64_t seed) {
  SearchSpec spec;
  spec.base.population_size = 56;
  spec.base.crossover_pairs = 20;
  spec.axes = {
      {"generations",
       {AxisValue::scalar(20), AxisValue::scalar(40), AxisValue::scalar(60),
        AxisValue::scalar(80), AxisValue::scalar(100)}},
      {"k_tournament",
       {AxisValue::scalar(2), AxisValue::scalar(5), AxisValue::scalar(7),
        AxisValue::scalar(10)}},
      {"mutation",
       {AxisValue::pair(0.9, 0.1), AxisValue::pair(0.75, 0.25),
        AxisValue::pair(0.5, 0.5)}},
  };
  spec.rng_seed = seed;
  return spec;
}

SearchSpec boundary_phase1_spec(std::uint64_t seed) {
  SearchSpec spec;
  spec.base.generations = 60;
  spec.base.population_size = 500;
  spec.base.crossover_pairs = 250;
  spec.axes = {
      {"k_tournament",
       {AxisValue::scalar(2), AxisValue::scalar(4), AxisValue::scalar(6),
        AxisValue::scalar(8), AxisValue::scalar(10)}},
      {"mutation",
       {AxisValue::pair(0.9, 0.1), AxisValue::pair(0.8, 0.2),
        AxisValue::pair(0.7, 0.3), AxisValue::pair(0.6, 0.4),
        AxisValue::pair(0.5, 0.5)}},
  };
  spec.rng_seed = seed;
  return spec;
}

SearchSpec boundary_phase2_spec(std::uint64_t seed) {
  SearchSpec spec;
  spec.base.k_tournament = 10;
  spec.base.p_low_fitness = 0.9;
  spec.base.p_high_fitness = 0.1;
  spec.crossover_half_population = true;
  spec.axes = {
      {"population",
       {AxisValue::scalar(100), AxisValue::scalar(200), AxisValue::scalar(400),
        AxisValue::scalar(600), AxisValue::scalar(800)}},
      {"generations",
       {AxisValue::scalar(40), AxisValue::scalar(60), AxisValue::scalar(80),
        AxisValue::scalar(100), AxisValue::scalar(120)}},
  };
  spec.rng_seed = seed;
  return spec;
}

}  // namespace tse::gridsearch
