#include "wrts/pmea/pmea.hpp"

#include <chrono>
#include <cstdio>
#include <map>

#include "wrts/common/fnv.hpp"
#include "wrts/common/kv_config.hpp"
#include "wrts/pmea/artifacts.hpp"
#include "wrts/world/engine.hpp"
#include "wrts/world/replay.hpp"

namespace wrts::pmea {

namespace {

constexpr std::uint64_t kPersonaStream = 0x70657273;
constexpr std::uint64_t kGameStream = 1;
constexpr std::uint64_t kEaStream = 2;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

const char* mode_name(ModelMode m) { return m == ModelMode::PerGame ? "PerGame" : "Cumulative"; }

nlohmann::json run_identity(const PmeaConfig& cfg, const std::string& opponent) {
  const std::string map_text = map_to_text(*cfg.map);
  return {{"format", "pmea-run-v1"},
          {"seed", cfg.seed},
          {"opponent", opponent},
          {"model_mode", mode_name(cfg.model_mode)},
          {"map_hash", fnv1a_append(kFnvOffsetBasis, map_text)},
          {"world", world_config_to_text(cfg.world)},
          {"ea",
           {{"popsize", cfg.ea.popsize},
            {"p_x", cfg.ea.p_x},
            {"p_m", cfg.ea.p_m},
            {"max_generations", cfg.ea.max_generations},
            {"evaluations_per_individual", cfg.ea.evaluations_per_individual},
            {"seed", cfg.ea.seed},
            {"movement_scope", cfg.ea.movement_scope == evo::MovementScope::BothArmies ? "BothArmies" : "VpOnly"}}}};
}

}  // namespace

OnlineGame play_game_on(const AnswerMatrix& vp, const Persona& persona, int game, const MapPtr& map,
                        const WorldConfig& world, std::uint64_t seed, const std::filesystem::path& replay) {
  const auto start = std::chrono::steady_clock::now();
  GameState state = spawn_game(map, world, seed);
  Rng rng(mix_seed(seed, kPersonaStream));
  ReplayWriter writer = replay.empty() ? ReplayWriter() : ReplayWriter(replay);
  const UnitPolicy vp_policy = matrix_policy(vp);
  OnlineGame result;
  std::vector<int> last_state(state.units.size(), -1);

  std::optional<Outcome> outcome;
  while (!(outcome = game_outcome(state))) {
    std::array<GroupOrder, kActionCount> groups;
    for (std::size_t slot = 0; slot < groups.size(); ++slot) groups[slot].action = kAllActions[slot];
    for (const Unit& u : state.units) {
      if (!u.alive || u.army != Army::HP) continue;
      const UnitPerception p = perceive(state, u);
      const StateIndex s = state_index(p);
      const Action desired = persona.decide(p, game, rng);
      auto& last = last_state[static_cast<std::size_t>(u.id)];
      if (desired == u.current_order && s.value() == last) continue;
      groups[action_slot(desired)].unit_ids.push_back(u.id);
      result.recorded.record(s, desired);
      last = s.value();
    }
    std::vector<GroupOrder> orders;
    for (auto& g : groups) {
      if (!g.unit_ids.empty()) orders.push_back(std::move(g));
    }
    writer.write(step_turn(state, orders, vp_policy));
  }
  result.outcome = *outcome;
  result.replay_hash = writer.hash();
  result.unit_orders = static_cast<long long>(result.recorded.total_observations());
  result.seconds = seconds_since(start);
  return result;
}

void PmeaConfig::validate() const {
  if (rounds < 1) throw ConfigError("pmea: rounds must be at least 1");
  if (!map) throw ConfigError("pmea: no map");
  world.validate();
  ea.validate();
}

nlohmann::json round_to_json(const RoundRecord& r) {
  return {{"format", "pmea-round-v1"},
          {"round", r.round},
          {"opponent", r.opponent},
          {"game_seed", r.game_seed},
          {"ea_seed", r.ea_seed},
          {"outcome", outcome_to_json(r.outcome)},
          {"observations", r.observations},
          {"best_fitness", r.best_fitness},
          {"evaluations", r.evaluations},
          {"game_seconds", r.game_seconds},
          {"evolve_seconds", r.evolve_seconds},
          {"replay_hash", r.replay_hash}};
}

RoundRecord round_from_json(const nlohmann::json& j) {
  RoundRecord r;
  r.round = j.at("round").get<int>();
  r.opponent = j.at("opponent").get<std::string>();
  r.game_seed = j.at("game_seed").get<std::uint64_t>();
  r.ea_seed = j.at("ea_seed").get<std::uint64_t>();
  r.outcome = outcome_from_json(j.at("outcome"));
  r.observations = j.at("observations").get<long long>();
  r.best_fitness = j.at("best_fitness").get<double>();
  r.evaluations = j.at("evaluations").get<long long>();
  r.game_seconds = j.at("game_seconds").get<double>();
  r.evolve_seconds = j.at("evolve_seconds").get<double>();
  r.replay_hash = j.at("replay_hash").get<std::uint64_t>();
  return r;
}

std::uint64_t round_game_seed(std::uint64_t seed, int round) {
  return mix_seed(seed, static_cast<std::uint64_t>(round), kGameStream);
}

std::uint64_t round_ea_seed(const PmeaConfig& cfg, int round) {
  return mix_seed(mix_seed(cfg.seed, cfg.ea.seed), static_cast<std::uint64_t>(round), kEaStream);
}

std::filesystem::path round_file(const std::filesystem::path& dir, std::string_view stem, int round,
                                 std::string_view ext) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", round);
  return dir / (std::string(stem) + "_" + buf + std::string(ext));
}

PmeaResult run_pmea(const PmeaConfig& cfg, Opponent& opponent, const PmeaOptions& options) {
  cfg.validate();
  const bool persist = !cfg.output_dir.empty();
  PmeaResult result;
  result.final_vp = rbp_default();
  ExtendedAnswerMatrix cumulative;
  int first_round = 1;

  if (persist) {
    std::filesystem::create_directories(cfg.output_dir);
    const auto identity = run_identity(cfg, opponent.describe());
    const auto run_path = cfg.output_dir / "run.json";
    if (std::filesystem::exists(run_path)) {
      if (read_json_artifact(run_path, "pmea-run-v1") != identity) {
        throw ArtifactError(ArtifactError::Kind::VersionMismatch,
                            run_path.string() + ": output directory belongs to a different run");
      }
    } else {
      write_json_artifact(run_path, identity);
    }

    // A round is complete once its genome exists; the genome is written last.
    int done = 0;
    while (done < cfg.rounds && std::filesystem::exists(round_file(cfg.output_dir, "genome", done + 1, ".json"))) {
      ++done;
    }
    const auto genome0 = round_file(cfg.output_dir, "genome", 0, ".json");
    if (done == 0 && !std::filesystem::exists(genome0)) save_genome(genome0, result.final_vp);
    result.final_vp = load_genome(round_file(cfg.output_dir, "genome", done, ".json"));
    for (int r = 1; r <= done; ++r) {
      result.rounds.push_back(round_from_json(read_json_artifact(round_file(cfg.output_dir, "round", r, ".json"),
                                                                 "pmea-round-v1")));
      if (cfg.model_mode == ModelMode::Cumulative) {
        cumulative = merge(cumulative, load_model(round_file(cfg.output_dir, "model", r, ".json")));
      }
    }
    result.resumed_after = done;
    first_round = done + 1;
  }

  for (int round = first_round; round <= cfg.rounds; ++round) {
    if (options.stop.stop_requested()) return result;
    RoundRecord rec;
    rec.round = round;
    rec.opponent = opponent.describe();
    rec.game_seed = round_game_seed(cfg.seed, round);
    rec.ea_seed = round_ea_seed(cfg, round);

    const auto replay_path = persist ? round_file(cfg.output_dir, "replay", round, ".jsonl") : std::filesystem::path{};
    OnlineGame game = opponent.play(result.final_vp, round, cfg.map, cfg.world, rec.game_seed, replay_path);
    rec.outcome = game.outcome;
    rec.observations = game.unit_orders;
    rec.game_seconds = game.seconds;
    rec.replay_hash = game.replay_hash;

    if (cfg.model_mode == ModelMode::Cumulative) cumulative = merge(cumulative, game.recorded);
    const ExtendedAnswerMatrix& model = cfg.model_mode == ModelMode::Cumulative ? cumulative : game.recorded;
    const AnswerMatrix player_model = extract_policy(model, rbp_default());

    evo::EAConfig ea = cfg.ea;
    ea.seed = rec.ea_seed;
    evo::EvolveOptions evo_options;
    evo_options.stop = options.stop;
    evo_options.on_generation = options.on_generation;
    const auto evolve_start = std::chrono::steady_clock::now();
    const evo::EvolveResult evolved = evo::evolve(player_model, result.final_vp, ea, cfg.map, cfg.world, evo_options);
    rec.evolve_seconds = seconds_since(evolve_start);
    // An interrupted evolve leaves the round incomplete; it is redone on resume.
    if (evolved.interrupted) return result;
    rec.best_fitness = evolved.best_fitness;
    rec.evaluations = evolved.evaluations;
    result.final_vp = evolved.best;

    if (persist) {
      save_model(round_file(cfg.output_dir, "model", round, ".json"), game.recorded);
      write_json_artifact(round_file(cfg.output_dir, "round", round, ".json"), round_to_json(rec));
      save_genome(round_file(cfg.output_dir, "genome", round, ".json"), result.final_vp);
    }
    result.rounds.push_back(rec);
    if (options.on_round) options.on_round(rec);
    if (options.stop_after_round > 0 && round >= options.stop_after_round && round < cfg.rounds) return result;
  }
  result.completed = true;
  return result;
}

}  // namespace wrts::pmea
