#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wrts/strategy/answer_matrix.hpp"
#include "wrts/strategy/state_index.hpp"
#include "wrts/world/game_state.hpp"

namespace wrts {

enum class EventKind : std::uint8_t { Order, OrderRejected, Move, Combat, Death, Capture };

struct Event {
  EventKind kind = EventKind::Move;
  int unit_id = -1;
  Cell from{};
  Cell to{};
  int damage = 0;
  int other_id = -1;  // combat: the unit that won the round
  Action action = Action::NoOperation;
  int state = -1;  // order: perception index of the unit when the order was applied
  std::string reason;

  friend bool operator==(const Event&, const Event&) = default;
};

struct TurnReport {
  int turn = 0;
  std::vector<Event> events;
  std::optional<Outcome> outcome;  // set on the turn that decides the game
};

/// A common order for a set of units.
struct GroupOrder {
  std::vector<int> unit_ids;
  Action action = Action::NoOperation;
};

/// Per-unit action source queried every turn with the unit's fresh perception.
using UnitPolicy = std::function<Action(const Unit&, const UnitPerception&)>;

UnitPolicy matrix_policy(AnswerMatrix matrix);

/// Units get ids interleaved by army in spawn order (VP first), every unit
/// starts at full health and energy with the Explore order, and each army's
/// knowledge covers its units' initial visual ranges.
GameState spawn_game(MapPtr map, const WorldConfig& config, std::uint64_t seed);

/// In-bounds cells within Euclidean distance phi of pos; no occlusion.
std::vector<Cell> visual_range(const Cell& pos, double phi, const Terrain& terrain);
bool within_visual_range(const Cell& a, const Cell& b, double phi);

/// Throws std::logic_error for a dead unit.
UnitPerception perceive(const GameState& state, const Unit& unit);

/// Advances the game by one turn. Phases, in order:
///   1. HP group orders overwrite current orders (invalid ids are rejected)
///   2. VP units (and HP units when hp_policy is given) pick an order from
///      their policy; an empty policy keeps the current order
///   3. every living unit, by ascending id, takes one navigation step
///   4. each adjacent pair of living enemies fights one round
///   5. units at zero health or energy die
///   6. fog of war and flag discovery update
///   7. a living unit on the rival flag captures it
///   8. turn += 1
/// Throws std::logic_error if the game is already decided.
TurnReport step_turn(GameState& state, std::span<const GroupOrder> hp_orders, const UnitPolicy& vp_policy,
                     const UnitPolicy* hp_policy = nullptr);

/// nullopt while the game is undecided.
std::optional<Outcome> game_outcome(const GameState& state);

}  // namespace wrts
