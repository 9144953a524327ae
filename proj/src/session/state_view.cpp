#include "wrts/session/state_view.hpp"

#include "wrts/world/replay.hpp"

namespace wrts::session {

namespace {

char terrain_glyph(TerrainType t) {
  switch (t) {
    case TerrainType::Passable: return '.';
    case TerrainType::Impassable: return '#';
    case TerrainType::SemiImpassable: return '~';
  }
  return '?';
}

nlohmann::json cell_json(const Cell& c) { return nlohmann::json::array({c.x, c.y}); }

Cell cell_from(const nlohmann::json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

}  // namespace

bool sensed_by(const GameState& state, Army army, const Cell& c) {
  for (const Unit& u : state.units) {
    if (u.alive && u.army == army && within_visual_range(u.pos, c, state.config.visual_range_phi)) return true;
  }
  return false;
}

StateView make_state_view(const GameState& state, Army army) {
  const Terrain& t = state.terrain();
  const ArmyKnowledge& k = state.knowledge[army_index(army)];
  StateView v;
  v.army = army;
  v.turn = state.turn;
  v.width = t.width();
  v.height = t.height();
  v.rows.assign(static_cast<std::size_t>(t.height()), std::string(static_cast<std::size_t>(t.width()), '?'));
  for (int y = 0; y < t.height(); ++y) {
    for (int x = 0; x < t.width(); ++x) {
      const Cell c{x, y};
      if (k.explored[t.index(c)]) v.rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)] = terrain_glyph(t.at(c));
    }
  }
  v.own_flag = state.flag(army);
  v.enemy_flag = k.enemy_flag_known;
  for (const Unit& u : state.units) {
    if (u.alive && u.army == army) v.units.push_back({u.id, u.army, u.pos, u.health, u.energy, u.current_order});
  }
  for (const Unit& u : state.units) {
    if (u.alive && u.army != army && sensed_by(state, army, u.pos)) {
      v.units.push_back({u.id, u.army, u.pos, u.health, u.energy, std::nullopt});
    }
  }
  return v;
}

std::vector<Event> visible_events(const GameState& state, const std::vector<Event>& events, Army army) {
  auto own = [&](int id) {
    return id >= 0 && id < static_cast<int>(state.units.size()) && state.units[static_cast<std::size_t>(id)].army == army;
  };
  std::vector<Event> out;
  for (const Event& e : events) {
    bool keep = own(e.unit_id);
    switch (e.kind) {
      case EventKind::Order:
      case EventKind::OrderRejected: break;
      case EventKind::Move: keep = keep || sensed_by(state, army, e.to); break;
      case EventKind::Combat: keep = keep || own(e.other_id); break;
      case EventKind::Death: keep = keep || sensed_by(state, army, e.from); break;
      case EventKind::Capture: keep = true; break;
    }
    if (keep) out.push_back(e);
  }
  return out;
}

nlohmann::json view_to_json(const StateView& v) {
  nlohmann::json units = nlohmann::json::array();
  for (const UnitView& u : v.units) {
    nlohmann::json j = {{"id", u.id}, {"army", army_name(u.army)}, {"pos", cell_json(u.pos)},
                        {"health", u.health}, {"energy", u.energy}};
    if (u.current_order) j["order"] = action_number(*u.current_order);
    units.push_back(std::move(j));
  }
  nlohmann::json j = {{"army", army_name(v.army)}, {"turn", v.turn},   {"width", v.width},
                      {"height", v.height},        {"rows", v.rows},   {"own_flag", cell_json(v.own_flag)},
                      {"units", units}};
  j["enemy_flag"] = v.enemy_flag ? cell_json(*v.enemy_flag) : nlohmann::json(nullptr);
  return j;
}

StateView view_from_json(const nlohmann::json& j) {
  StateView v;
  v.army = j.at("army").get<std::string>() == army_name(Army::VP) ? Army::VP : Army::HP;
  v.turn = j.at("turn").get<int>();
  v.width = j.at("width").get<int>();
  v.height = j.at("height").get<int>();
  v.rows = j.at("rows").get<std::vector<std::string>>();
  v.own_flag = cell_from(j.at("own_flag"));
  if (!j.at("enemy_flag").is_null()) v.enemy_flag = cell_from(j.at("enemy_flag"));
  for (const auto& u : j.at("units")) {
    UnitView uv;
    uv.id = u.at("id").get<int>();
    uv.army = u.at("army").get<std::string>() == army_name(Army::VP) ? Army::VP : Army::HP;
    uv.pos = cell_from(u.at("pos"));
    uv.health = u.at("health").get<int>();
    uv.energy = u.at("energy").get<int>();
    if (u.contains("order")) uv.current_order = action_from_int(u.at("order").get<int>());
    v.units.push_back(uv);
  }
  return v;
}

}  // namespace wrts::session
