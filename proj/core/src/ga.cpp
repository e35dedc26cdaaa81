#include "tse/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace tse::ga {

namespace {

void validate(const GAConfig& c) {
  if (c.population_size < 2) throw ConfigError("ga: population_size must be >= 2");
  if (c.generations < 1) throw ConfigError("ga: generations must be >= 1");
  if (c.k_tournament < 1 || c.k_tournament > c.population_size) {
    throw ConfigError("ga: k_tournament must be in [1, population_size]");
  }
  if (c.p_low_fitness < 0 || c.p_low_fitness > 1 || c.p_high_fitness < 0 ||
      c.p_high_fitness > 1) {
    throw ConfigError("ga: mutation probabilities must be in [0, 1]");
  }
  if (c.gene_bounds.empty()) throw ConfigError("ga: gene_bounds must be set");
  for (const auto& b : c.gene_bounds) {
    if (!(b.lo < b.hi)) throw ConfigError("ga: gene bounds require lo < hi");
  }
}

Genome random_genome(const GAConfig& c, Rng& rng) {
  Genome g(c.gene_bounds.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::uniform_real_distribution<double> dist(c.gene_bounds[i].lo,
                                                c.gene_bounds[i].hi);
    g[i] = dist(rng);
  }
  return g;
}

// Evaluates a candidate, resampling it while the fitness is non-finite.
double evaluate_or_resample(const GAConfig& c, const FitnessFn& fitness,
                            Genome& genome, Rng& rng) {
  constexpr int kMaxResamples = 1000;
  double f = fitness(genome);
  for (int tries = 0; !std::isfinite(f); ++tries) {
    if (tries >= kMaxResamples) {
      throw DomainError("ga: could not sample a candidate with finite fitness");
    }
    genome = random_genome(c, rng);
    f = fitness(genome);
  }
  return f;
}

}  // namespace

namespace {

std::size_t tournament_select_index(const std::vector<double>& fitnesses, int k,
                                    Rng& rng) {
  const std::size_t n = fitnesses.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw ConfigError("ga: tournament size exceeds population");
  }
  // Partial Fisher-Yates over an index vector: first k slots are a uniform
  // without-replacement draw.
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::size_t best = n;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
    if (best == n || fitnesses[idx[i]] > fitnesses[best]) best = idx[i];
  }
  return best;
}

}  // namespace

const Genome& tournament_select(const std::vector<Genome>& population,
                                const std::vector<double>& fitnesses, int k,
                                Rng& rng) {
  return population[tournament_select_index(fitnesses, k, rng)];
}

std::pair<Genome, Genome> uniform_crossover(const Genome& parent_a,
                                            const Genome& parent_b, Rng& rng) {
  if (parent_a.size() != parent_b.size()) {
    throw ConfigError("ga: crossover parents differ in length");
  }
  Genome a = parent_a;
  Genome b = parent_b;
  std::bernoulli_distribution coin(0.5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (coin(rng)) std::swap(a[i], b[i]);
  }
  return {std::move(a), std::move(b)};
}

Genome adaptive_mutate(const Genome& genome, double fitness,
                       double population_mean_fitness, const GAConfig& config,
                       Rng& rng) {
  const double p = fitness < population_mean_fitness ? config.p_low_fitness
                                                     : config.p_high_fitness;
  Genome out = genome;
  if (p <= 0.0) return out;
  std::bernoulli_distribution hit(p);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (hit(rng)) {
      std::uniform_real_distribution<double> dist(config.gene_bounds[i].lo,
                                                  config.gene_bounds[i].hi);
      out[i] = dist(rng);
    }
  }
  return out;
}

GAResult run(const GAConfig& config, const FitnessFn& fitness) {
  validate(config);
  Rng rng(config.rng_seed);
  const std::size_t pop_size = static_cast<std::size_t>(config.population_size);
  const std::size_t pool_size =
      config.mating_pool_size > 0 ? static_cast<std::size_t>(config.mating_pool_size)
                                  : pop_size;

  std::vector<Genome> population(pop_size);
  std::vector<double> fitnesses(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    population[i] = random_genome(config, rng);
    fitnesses[i] = evaluate_or_resample(config, fitness, population[i], rng);
  }

  GAResult result;
  result.fitness_trace.reserve(config.generations);

  for (int gen = 0; gen < config.generations; ++gen) {
    const std::size_t best_idx = static_cast<std::size_t>(
        std::max_element(fitnesses.begin(), fitnesses.end()) - fitnesses.begin());
    if (result.best_genome.empty() || fitnesses[best_idx] > result.best_fitness) {
      result.best_genome = population[best_idx];
      result.best_fitness = fitnesses[best_idx];
    }
    result.fitness_trace.push_back(result.best_fitness);
    if (gen + 1 == config.generations) break;

    const double mean =
        std::accumulate(fitnesses.begin(), fitnesses.end(), 0.0) /
        static_cast<double>(pop_size);

    // Mating pool via K-way tournaments; keep each member's fitness so the
    // adaptive mutation rate can be decided per source candidate.
    std::vector<Genome> pool;
    std::vector<double> pool_fit;
    pool.reserve(pool_size);
    pool_fit.reserve(pool_size);
    for (std::size_t i = 0; i < pool_size; ++i) {
      const std::size_t w =
          tournament_select_index(fitnesses, config.k_tournament, rng);
      pool.push_back(population[w]);
      pool_fit.push_back(fitnesses[w]);
    }

    std::vector<Genome> next;
    std::vector<double> next_src_fitness;  // drives the mutation rate
    next.reserve(pop_size);
    next_src_fitness.reserve(pop_size);

    // Elite slot: carried over unmutated.
    next.push_back(population[best_idx]);
    next_src_fitness.push_back(fitnesses[best_idx]);

    std::uniform_int_distribution<std::size_t> pick(0, pool_size - 1);
    const int pairs = std::max(0, config.crossover_pairs);
    for (int p = 0; p < pairs && next.size() < pop_size; ++p) {
      const std::size_t ia = pick(rng);
      const std::size_t ib = pick(rng);
      auto [ca, cb] = uniform_crossover(pool[ia], pool[ib], rng);
      const double src = 0.5 * (pool_fit[ia] + pool_fit[ib]);
      next.push_back(std::move(ca));
      next_src_fitness.push_back(src);
      if (next.size() < pop_size) {
        next.push_back(std::move(cb));
        next_src_fitness.push_back(src);
      }
    }
    while (next.size() < pop_size) {
      const std::size_t i = pick(rng);
      next.push_back(pool[i]);
      next_src_fitness.push_back(pool_fit[i]);
    }

    for (std::size_t i = 1; i < pop_size; ++i) {
      next[i] = adaptive_mutate(next[i], next_src_fitness[i], mean, config, rng);
    }

    population = std::move(next);
    for (std::size_t i = 0; i < pop_size; ++i) {
      fitnesses[i] = evaluate_or_resample(config, fitness, population[i], rng);
    }
  }
  return result;
}

}  // namespace tse::ga
