#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <stop_token>
#include <string>
#include <vector>

#include "json.hpp"
#include "wrts/evolution/evolution.hpp"
#include "wrts/modeling/extended_answer_matrix.hpp"
#include "wrts/pmea/persona.hpp"
#include "wrts/world/config.hpp"
#include "wrts/world/game_state.hpp"

namespace wrts::pmea {

/// Result of one on-line game, seen from the recorder.
struct OnlineGame {
  Outcome outcome;
  ExtendedAnswerMatrix recorded;
  std::uint64_t replay_hash = 0;
  double seconds = 0.0;
  long long unit_orders = 0;  // recorded observations
};

/// Whoever plays the HP army during the on-line phase.
class Opponent {
 public:
  virtual ~Opponent() = default;
  virtual std::string describe() const = 0;
  /// Plays game number `game` (1-based) against the locked controller `vp`.
  /// An empty replay path skips writing the replay file.
  virtual OnlineGame play(const AnswerMatrix& vp, int game, const MapPtr& map, const WorldConfig& world,
                          std::uint64_t seed, const std::filesystem::path& replay) = 0;
};

/// Headless on-line game. Every turn the persona looks at each living HP
/// unit; when its decision differs from the unit's current order, or the
/// unit's perception changed since its last order, the unit is ordered and
/// the (state, action) pair is recorded. Orders go out as one group order per
/// action.
OnlineGame play_game_on(const AnswerMatrix& vp, const Persona& persona, int game, const MapPtr& map,
                        const WorldConfig& world, std::uint64_t seed, const std::filesystem::path& replay = {});

class PersonaOpponent : public Opponent {
 public:
  explicit PersonaOpponent(Persona persona) : persona_(std::move(persona)) {}
  std::string describe() const override { return persona_.name(); }
  OnlineGame play(const AnswerMatrix& vp, int game, const MapPtr& map, const WorldConfig& world, std::uint64_t seed,
                  const std::filesystem::path& replay) override {
    return play_game_on(vp, persona_, game, map, world, seed, replay);
  }
  const Persona& persona() const { return persona_; }

 private:
  Persona persona_;
};

enum class ModelMode { PerGame, Cumulative };

struct PmeaConfig {
  int rounds = 20;
  MapPtr map;
  WorldConfig world;
  evo::EAConfig ea;
  ModelMode model_mode = ModelMode::PerGame;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir;  // empty: nothing persisted, no resume

  void validate() const;
};

struct RoundRecord {
  int round = 0;
  std::string opponent;
  std::uint64_t game_seed = 0;
  std::uint64_t ea_seed = 0;
  Outcome outcome;
  long long observations = 0;
  double best_fitness = 0.0;
  long long evaluations = 0;
  double game_seconds = 0.0;
  double evolve_seconds = 0.0;
  std::uint64_t replay_hash = 0;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

nlohmann::json round_to_json(const RoundRecord& r);
RoundRecord round_from_json(const nlohmann::json& j);

struct PmeaOptions {
  int stop_after_round = 0;  // > 0: return after this round as if killed
  std::stop_token stop;
  std::function<void(const RoundRecord&)> on_round;
  std::function<void(const evo::GenerationRecord&)> on_generation;
};

struct PmeaResult {
  AnswerMatrix final_vp;
  std::vector<RoundRecord> rounds;  // includes rounds restored on resume
  int resumed_after = 0;            // rounds found on disk at start
  bool completed = false;
};

std::uint64_t round_game_seed(std::uint64_t seed, int round);
std::uint64_t round_ea_seed(const PmeaConfig& cfg, int round);

/// The adaptive loop: VP starts as rbp_default; each round plays an on-line game,
/// extracts the player model (unobserved states fall back to rbp_default) and
/// evolves the VP against it. With an output directory, each round persists
/// replay_NNN.jsonl, model_NNN.json, round_NNN.json and finally genome_NNN.json,
/// and a rerun resumes after the last complete round.
PmeaResult run_pmea(const PmeaConfig& cfg, Opponent& opponent, const PmeaOptions& options = {});

std::filesystem::path round_file(const std::filesystem::path& dir, std::string_view stem, int round,
                                 std::string_view ext);

}  // namespace wrts::pmea
