#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stop_token>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wrts/common/rng.hpp"
#include "wrts/strategy/answer_matrix.hpp"
#include "wrts/world/config.hpp"
#include "wrts/world/game_state.hpp"
#include "wrts/world/terrain.hpp"

namespace wrts::evo {

/// Which armies' moves count towards C in the fitness.
enum class MovementScope { BothArmies, VpOnly };

struct EAConfig {
  int popsize = 50;
  double p_x = 0.7;
  double p_m = 0.01;
  int max_generations = 125;
  int evaluations_per_individual = 1;
  std::uint64_t seed = 0;
  MovementScope movement_scope = MovementScope::BothArmies;
  int threads = 1;  // concurrent game simulations per batch

  void validate() const;
};

EAConfig parse_ea_config(std::string_view text);
EAConfig load_ea_config(const std::filesystem::path& path);

/// Telemetry of one off-line game, from the virtual player's point of view.
struct SimStats {
  int a_deaths_model_army = 0;
  int b_deaths_vp_army = 0;
  long long c_movements = 1;   // executed unit moves, at least 1
  int d_victory_degree = 2;    // 1 if the virtual player won, else 2
  Outcome outcome;
};

SimStats stats_from_outcome(const Outcome& outcome, const GameState& final_state, MovementScope scope);

/// 10000 * (A - B) / (C * D)
double fitness(const SimStats& stats);

/// One headless game: `model` drives the HP army and `candidate` the VP army,
/// both looked up per unit every turn.
SimStats play_game_off(const AnswerMatrix& model, const AnswerMatrix& candidate, const MapPtr& map,
                       const WorldConfig& world, std::uint64_t seed,
                       MovementScope scope = MovementScope::BothArmies);

struct EvaluatedIndividual {
  AnswerMatrix genome;
  double fitness = 0.0;
  std::uint64_t eval_seed = 0;
};

/// Roulette wheel over shifted fitness: w_i = (f_i - f_min) + eps with
/// eps = 0.001 * (f_max - f_min + 1). Returns an index into `fitnesses`.
std::size_t roulette_index(std::span<const double> fitnesses, Rng& rng);
const EvaluatedIndividual& select_roulette(std::span<const EvaluatedIndividual> population, Rng& rng);

/// One-point crossover with a uniform cut in 1..23.
std::pair<AnswerMatrix, AnswerMatrix> recombine(const AnswerMatrix& p1, const AnswerMatrix& p2, Rng& rng);
std::pair<AnswerMatrix, AnswerMatrix> recombine_at(const AnswerMatrix& p1, const AnswerMatrix& p2, int cut);

/// Each gene independently, with probability p_m, becomes one of the other
/// five actions.
AnswerMatrix mutate(const AnswerMatrix& genome, double p_m, Rng& rng);

AnswerMatrix random_genome(Rng& rng);

struct GenerationRecord {
  int generation = 0;  // 0 is the initial population
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  AnswerMatrix best_genome;
  long long evaluations = 0;  // cumulative
  friend bool operator==(const GenerationRecord&, const GenerationRecord&) = default;
};

nlohmann::json generation_to_json(const GenerationRecord& r);

struct EvolveResult {
  AnswerMatrix best;
  double best_fitness = 0.0;
  long long evaluations = 0;
  std::vector<GenerationRecord> history;
  std::vector<EvaluatedIndividual> final_population;
  bool interrupted = false;
};

struct EvolveOptions {
  std::stop_token stop;
  std::function<void(const GenerationRecord&)> on_generation;
  /// Called after every replacement with the new population (tests).
  std::function<void(std::span<const EvaluatedIndividual>)> on_population;
};

/// Scores a candidate genome for a given evaluation seed.
using Evaluator = std::function<double(const AnswerMatrix& candidate, std::uint64_t seed)>;

/// Steady-state loop: popsize-1 random genomes plus `seed_vp`, then per
/// generation two roulette parents, crossover with probability p_x, mutation
/// of both children, evaluation, and truncation of the popsize+2 pool.
/// The evaluator may be called from several threads when cfg.threads > 1.
EvolveResult evolve_with(const Evaluator& evaluate, const AnswerMatrix& seed_vp, const EAConfig& cfg,
                         const EvolveOptions& options = {});

/// Evolves a virtual player against a fixed player model by off-line games.
EvolveResult evolve(const AnswerMatrix& player_model, const AnswerMatrix& vp, const EAConfig& cfg, const MapPtr& map,
                    const WorldConfig& world, const EvolveOptions& options = {});

}  // namespace wrts::evo
