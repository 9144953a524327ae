#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wrts/world/engine.hpp"

namespace wrts::session {

struct UnitView {
  int id = 0;
  Army army = Army::HP;
  Cell pos{};
  int health = 0;
  int energy = 0;
  std::optional<Action> current_order;  // own units only

  friend bool operator==(const UnitView&, const UnitView&) = default;
};

/// What one army may see at a turn boundary.
struct StateView {
  Army army = Army::HP;
  int turn = 0;
  int width = 0;
  int height = 0;
  std::vector<std::string> rows;  // terrain glyphs . # ~ for explored cells, '?' elsewhere
  Cell own_flag{};
  std::optional<Cell> enemy_flag;
  std::vector<UnitView> units;  // own living units, then visible living rivals, by id

  friend bool operator==(const StateView&, const StateView&) = default;
};

/// Fog filter: explored terrain from the army's knowledge, its own units,
/// rivals inside some own unit's visual range, the rival flag once known.
StateView make_state_view(const GameState& state, Army army);

/// True when `c` lies in the visual range of a living unit of `army`.
bool sensed_by(const GameState& state, Army army, const Cell& c);

/// The subset of a turn's events that `army` can observe after the turn.
std::vector<Event> visible_events(const GameState& state, const std::vector<Event>& events, Army army);

nlohmann::json view_to_json(const StateView& v);
StateView view_from_json(const nlohmann::json& j);

}  // namespace wrts::session
