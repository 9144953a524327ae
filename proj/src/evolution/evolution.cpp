#include "wrts/evolution/evolution.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <stdexcept>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "wrts/common/kv_config.hpp"
#include "wrts/world/engine.hpp"

namespace wrts::evo {

void EAConfig::validate() const {
  if (popsize < 2) throw ConfigError("ea config: popsize must be at least 2");
  if (!(p_x >= 0 && p_x <= 1)) throw ConfigError("ea config: p_x must lie in [0,1]");
  if (!(p_m >= 0 && p_m <= 1)) throw ConfigError("ea config: p_m must lie in [0,1]");
  if (max_generations < 0) throw ConfigError("ea config: max_generations must be non-negative");
  if (evaluations_per_individual < 1) throw ConfigError("ea config: evaluations_per_individual must be positive");
  if (threads < 1) throw ConfigError("ea config: threads must be positive");
}

EAConfig parse_ea_config(std::string_view text) {
  EAConfig cfg;
  for (const auto& [key, value] : parse_key_values(text)) {
    if (key == "popsize") {
      cfg.popsize = parse_int(key, value);
    } else if (key == "p_x") {
      cfg.p_x = parse_real(key, value);
    } else if (key == "p_m") {
      cfg.p_m = parse_real(key, value);
    } else if (key == "max_generations") {
      cfg.max_generations = parse_int(key, value);
    } else if (key == "evaluations_per_individual") {
      cfg.evaluations_per_individual = parse_int(key, value);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int64(key, value));
    } else if (key == "movement_scope") {
      if (value == "BothArmies") {
        cfg.movement_scope = MovementScope::BothArmies;
      } else if (value == "VpOnly") {
        cfg.movement_scope = MovementScope::VpOnly;
      } else {
        throw ConfigError("movement_scope must be BothArmies or VpOnly");
      }
    } else if (key == "threads") {
      cfg.threads = parse_int(key, value);
    } else {
      throw ConfigError("unknown ea config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

EAConfig load_ea_config(const std::filesystem::path& path) { return parse_ea_config(read_text_file(path)); }

SimStats stats_from_outcome(const Outcome& outcome, const GameState& final_state, MovementScope scope) {
  SimStats s;
  s.a_deaths_model_army = outcome.deaths_hp;
  s.b_deaths_vp_army = outcome.deaths_vp;
  const long long moves = scope == MovementScope::BothArmies ? outcome.movements
                                                             : final_state.movements[army_index(Army::VP)];
  s.c_movements = std::max(1LL, moves);
  s.d_victory_degree = outcome.winner == Winner::VP ? 1 : 2;
  s.outcome = outcome;
  return s;
}

double fitness(const SimStats& s) {
  const double c = static_cast<double>(std::max(1LL, s.c_movements));
  return 10000.0 * static_cast<double>(s.a_deaths_model_army - s.b_deaths_vp_army) /
         (c * static_cast<double>(s.d_victory_degree));
}

SimStats play_game_off(const AnswerMatrix& model, const AnswerMatrix& candidate, const MapPtr& map,
                       const WorldConfig& world, std::uint64_t seed, MovementScope scope) {
  GameState state = spawn_game(map, world, seed);
  const UnitPolicy vp = matrix_policy(candidate);
  const UnitPolicy hp = matrix_policy(model);
  std::optional<Outcome> outcome;
  while (!(outcome = game_outcome(state))) step_turn(state, {}, vp, &hp);
  return stats_from_outcome(*outcome, state, scope);
}

std::size_t roulette_index(std::span<const double> fitnesses, Rng& rng) {
  const auto [lo, hi] = std::minmax_element(fitnesses.begin(), fitnesses.end());
  const double f_min = *lo;
  const double eps = 0.001 * (*hi - f_min + 1.0);
  double total = 0.0;
  for (const double f : fitnesses) total += (f - f_min) + eps;
  double r = rng.uniform01() * total;
  for (std::size_t i = 0; i < fitnesses.size(); ++i) {
    r -= (fitnesses[i] - f_min) + eps;
    if (r < 0) return i;
  }
  return fitnesses.size() - 1;
}

const EvaluatedIndividual& select_roulette(std::span<const EvaluatedIndividual> population, Rng& rng) {
  std::vector<double> f;
  f.reserve(population.size());
  for (const auto& ind : population) f.push_back(ind.fitness);
  return population[roulette_index(f, rng)];
}

std::pair<AnswerMatrix, AnswerMatrix> recombine_at(const AnswerMatrix& p1, const AnswerMatrix& p2, int cut) {
  if (cut < 1 || cut >= kStateCount) throw std::logic_error("crossover cut must lie in 1..23");
  AnswerMatrix c1 = p1;
  AnswerMatrix c2 = p2;
  for (int i = cut; i < kStateCount; ++i) {
    c1.set(i, p2.at(i));
    c2.set(i, p1.at(i));
  }
  return {c1, c2};
}

std::pair<AnswerMatrix, AnswerMatrix> recombine(const AnswerMatrix& p1, const AnswerMatrix& p2, Rng& rng) {
  const int cut = 1 + static_cast<int>(rng.below(kStateCount - 1));
  return recombine_at(p1, p2, cut);
}

AnswerMatrix mutate(const AnswerMatrix& genome, double p_m, Rng& rng) {
  AnswerMatrix out = genome;
  for (int i = 0; i < kStateCount; ++i) {
    if (!rng.bernoulli(p_m)) continue;
    const std::size_t current = action_slot(genome.at(i));
    std::size_t pick = static_cast<std::size_t>(rng.below(kActionCount - 1));
    if (pick >= current) ++pick;
    out.set(i, kAllActions[pick]);
  }
  return out;
}

AnswerMatrix random_genome(Rng& rng) {
  AnswerMatrix m;
  for (int i = 0; i < kStateCount; ++i) m.set(i, kAllActions[rng.below(kActionCount)]);
  return m;
}

nlohmann::json generation_to_json(const GenerationRecord& r) {
  return {{"gen", r.generation},
          {"best_fitness", r.best_fitness},
          {"mean_fitness", r.mean_fitness},
          {"best_genome", r.best_genome.to_ints()},
          {"evaluations", r.evaluations}};
}

namespace {

struct Job {
  const AnswerMatrix* genome;
  std::uint64_t seed;
  double result = 0.0;
};

/// Runs jobs on up to `threads` workers; results land in job slots so the
/// outcome does not depend on scheduling.
void run_jobs(std::vector<Job>& jobs, const Evaluator& evaluate, int threads) {
  if (threads <= 1 || jobs.size() <= 1) {
    for (Job& j : jobs) j.result = evaluate(*j.genome, j.seed);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) jobs[i].result = evaluate(*jobs[i].genome, jobs[i].seed);
  };
  std::vector<std::jthread> pool;
  const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(threads), jobs.size());
  for (std::size_t t = 0; t + 1 < n; ++t) pool.emplace_back(worker);
  worker();
}

GenerationRecord summarize(int generation, std::span<const EvaluatedIndividual> pop, long long evaluations) {
  GenerationRecord r;
  r.generation = generation;
  r.evaluations = evaluations;
  const auto best = std::max_element(pop.begin(), pop.end(), [](const auto& a, const auto& b) {
    return a.fitness < b.fitness;
  });
  r.best_fitness = best->fitness;
  r.best_genome = best->genome;
  double sum = 0.0;
  for (const auto& ind : pop) sum += ind.fitness;
  r.mean_fitness = sum / static_cast<double>(pop.size());
  return r;
}

void rank(std::vector<EvaluatedIndividual>& pop) {
  std::stable_sort(pop.begin(), pop.end(), [](const auto& a, const auto& b) { return a.fitness > b.fitness; });
}

}  // namespace

EvolveResult evolve_with(const Evaluator& evaluate, const AnswerMatrix& seed_vp, const EAConfig& cfg,
                         const EvolveOptions& options) {
  cfg.validate();
  Rng rng(mix_seed(cfg.seed, 0xEA));
  const int k = cfg.evaluations_per_individual;
  EvolveResult result;

  // Fitness of a genome is the mean over k games with seeds derived from its
  // evaluation seed.
  auto score = [&](std::vector<EvaluatedIndividual*>& batch) {
    std::vector<Job> jobs;
    jobs.reserve(batch.size() * static_cast<std::size_t>(k));
    for (EvaluatedIndividual* ind : batch) {
      for (int r = 0; r < k; ++r) {
        jobs.push_back({&ind->genome, k == 1 ? ind->eval_seed : mix_seed(ind->eval_seed, static_cast<std::uint64_t>(r))});
      }
    }
    run_jobs(jobs, evaluate, cfg.threads);
    for (std::size_t i = 0; i < batch.size(); ++i) {
      double sum = 0.0;
      for (int r = 0; r < k; ++r) sum += jobs[i * static_cast<std::size_t>(k) + static_cast<std::size_t>(r)].result;
      batch[i]->fitness = sum / k;
    }
    result.evaluations += static_cast<long long>(jobs.size());
  };

  std::vector<EvaluatedIndividual> pop(static_cast<std::size_t>(cfg.popsize));
  for (int i = 0; i + 1 < cfg.popsize; ++i) pop[static_cast<std::size_t>(i)].genome = random_genome(rng);
  pop.back().genome = seed_vp;
  {
    std::vector<EvaluatedIndividual*> batch;
    for (int i = 0; i < cfg.popsize; ++i) {
      pop[static_cast<std::size_t>(i)].eval_seed = mix_seed(cfg.seed, 0, static_cast<std::uint64_t>(i));
      batch.push_back(&pop[static_cast<std::size_t>(i)]);
    }
    score(batch);
  }
  result.history.push_back(summarize(0, pop, result.evaluations));
  if (options.on_generation) options.on_generation(result.history.back());
  if (options.on_population) options.on_population(pop);

  for (int gen = 1; gen <= cfg.max_generations; ++gen) {
    if (options.stop.stop_requested()) {
      result.interrupted = true;
      break;
    }
    rank(pop);
    const EvaluatedIndividual& parent1 = select_roulette(pop, rng);
    const EvaluatedIndividual& parent2 = select_roulette(pop, rng);
    std::pair<AnswerMatrix, AnswerMatrix> children{parent1.genome, parent2.genome};
    if (rng.uniform01() < cfg.p_x) children = recombine(parent1.genome, parent2.genome, rng);

    std::array<EvaluatedIndividual, 2> kids;
    kids[0].genome = mutate(children.first, cfg.p_m, rng);
    kids[1].genome = mutate(children.second, cfg.p_m, rng);
    kids[0].eval_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(gen), 0);
    kids[1].eval_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(gen), 1);
    std::vector<EvaluatedIndividual*> batch{&kids[0], &kids[1]};
    score(batch);

    // (popsize + 2) replacement: keep the best popsize, earlier entries first on ties.
    pop.push_back(std::move(kids[0]));
    pop.push_back(std::move(kids[1]));
    rank(pop);
    pop.resize(static_cast<std::size_t>(cfg.popsize));

    result.history.push_back(summarize(gen, pop, result.evaluations));
    if (options.on_generation) options.on_generation(result.history.back());
    if (options.on_population) options.on_population(pop);
  }

  // Best individual; equal-fitness draws are broken uniformly at random.
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& ind : pop) best = std::max(best, ind.fitness);
  std::vector<std::size_t> tied;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (pop[i].fitness == best) tied.push_back(i);
  }
  const std::size_t pick = tied[tied.size() == 1 ? 0 : rng.below(tied.size())];
  result.best = pop[pick].genome;
  result.best_fitness = pop[pick].fitness;
  result.final_population = std::move(pop);
  return result;
}

EvolveResult evolve(const AnswerMatrix& player_model, const AnswerMatrix& vp, const EAConfig& cfg, const MapPtr& map,
                    const WorldConfig& world, const EvolveOptions& options) {
  const Evaluator evaluate = [&](const AnswerMatrix& candidate, std::uint64_t seed) {
    return fitness(play_game_off(player_model, candidate, map, world, seed, cfg.movement_scope));
  };
  return evolve_with(evaluate, vp, cfg, options);
}

}  // namespace wrts::evo
