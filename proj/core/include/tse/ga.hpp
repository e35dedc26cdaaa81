#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "tse/errors.hpp"

namespace tse::ga {

using Genome = std::vector<double>;
using FitnessFn = std::function<double(const Genome&)>;
using Rng = std::mt19937_64;

struct GeneBounds {
  double lo = 0.0;
  double hi = 1.0;
};

/// Real-vector GA: K-way tournament selection, uniform crossover and
/// two-rate adaptive mutation. The mutation threshold is the population
/// mean fitness; candidates below it mutate at p_low_fitness, the rest
/// at p_high_fitness. Elitism of 1.
struct GAConfig {
  int population_size = 56;
  int generations = 100;
  int k_tournament = 5;
  int mating_pool_size = 0;  // 0 -> population_size
  int crossover_pairs = 20;  // offspring pairs per generation
  double p_low_fitness = 0.65;
  double p_high_fitness = 0.35;
  std::vector<GeneBounds> gene_bounds;
  std::uint64_t rng_seed = 0;
};

struct GAResult {
  Genome best_genome;
  double best_fitness = 0.0;
  std::vector<double> fitness_trace;  // best-so-far per generation
};

/// Maximizes the fitness function over the gene-bounds box.
GAResult run(const GAConfig& config, const FitnessFn& fitness);

/// Max-fitness genome among k candidates drawn uniformly without replacement.
const Genome& tournament_select(const std::vector<Genome>& population,
                                const std::vector<double>& fitnesses, int k,
                                Rng& rng);

/// Per gene, an independent fair coin routes parent genes to the children.
std::pair<Genome, Genome> uniform_crossover(const Genome& parent_a,
                                            const Genome& parent_b, Rng& rng);

/// Resamples each gene uniformly within its bounds with the candidate's
/// adaptive mutation probability.
Genome adaptive_mutate(const Genome& genome, double fitness,
                       double population_mean_fitness, const GAConfig& config,
                       Rng& rng);

}  // namespace tse::ga
