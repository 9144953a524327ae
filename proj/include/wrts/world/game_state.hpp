#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "wrts/common/cell.hpp"
#include "wrts/common/rng.hpp"
#include "wrts/navigation/nav_types.hpp"
#include "wrts/strategy/action.hpp"
#include "wrts/world/config.hpp"
#include "wrts/world/terrain.hpp"

namespace wrts {

struct Unit {
  int id = 0;
  Army army = Army::VP;
  Cell pos{};
  int health = 0;
  int energy = 0;
  Action current_order = Action::Explore;
  bool alive = true;

  friend bool operator==(const Unit&, const Unit&) = default;
};

struct Sighting {
  Cell cell;
  int turn = 0;

  friend bool operator==(const Sighting&, const Sighting&) = default;
};

/// Everything one army has learnt so far.
struct ArmyKnowledge {
  std::vector<std::uint8_t> explored;  // 1 once a cell has been inside an own visual range
  int explored_count = 0;
  std::optional<Cell> enemy_flag_known;
  std::deque<Sighting> last_seen_enemies;  // within the sighting window, oldest first
  std::vector<int> sighting_counts;        // per cell, over last_seen_enemies
  std::optional<Cell> densest_sighting;    // explored cell with the most recent sightings

  friend bool operator==(const ArmyKnowledge&, const ArmyKnowledge&) = default;
};

enum class Winner : std::uint8_t { VP, HP, Draw };
enum class OutcomeReason : std::uint8_t { FlagCaptured, DamageTiebreak, Draw };

struct Outcome {
  Winner winner = Winner::Draw;
  OutcomeReason reason = OutcomeReason::Draw;
  int deaths_hp = 0;
  int deaths_vp = 0;
  long long movements = 0;
  int turns = 0;

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

const char* winner_name(Winner w);
const char* reason_name(OutcomeReason r);

/// Complete state of one game. Units are indexed by id.
struct GameState {
  MapPtr map;
  WorldConfig config;
  std::vector<Unit> units;
  std::vector<int> occupancy;  // cell index -> id of the living unit there, or -1
  std::array<ArmyKnowledge, 2> knowledge;
  std::array<std::vector<double>, 2> pheromone;
  std::vector<nav::NavContext> nav;  // per unit id
  std::array<int, 2> initial_units{};
  std::array<int, 2> deaths{};
  std::array<long long, 2> movements{};
  int turn = 0;
  Rng rng;
  std::optional<Outcome> final_outcome;  // set once the game is decided
  std::vector<Cell> vr_offsets;  // offsets within visual_range_phi of the origin

  const Terrain& terrain() const { return map->terrain; }
  const Cell& flag(Army a) const { return map->flag(a); }
  int unit_at(const Cell& c) const { return occupancy[terrain().index(c)]; }
  int living(Army a) const { return initial_units[army_index(a)] - deaths[army_index(a)]; }

  friend bool operator==(const GameState& a, const GameState& b);
};

}  // namespace wrts
