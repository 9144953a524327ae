#include "wrts/world/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wrts/navigation/navigator.hpp"

namespace wrts {

const char* winner_name(Winner w) {
  switch (w) {
    case Winner::VP: return "VP";
    case Winner::HP: return "HP";
    case Winner::Draw: return "Draw";
  }
  return "?";
}

const char* reason_name(OutcomeReason r) {
  switch (r) {
    case OutcomeReason::FlagCaptured: return "FlagCaptured";
    case OutcomeReason::DamageTiebreak: return "DamageTiebreak";
    case OutcomeReason::Draw: return "Draw";
  }
  return "?";
}

bool operator==(const GameState& a, const GameState& b) {
  const bool same_map = a.map == b.map || (a.map && b.map && *a.map == *b.map);
  return same_map && a.config == b.config && a.units == b.units && a.occupancy == b.occupancy &&
         a.knowledge == b.knowledge && a.pheromone == b.pheromone && a.nav == b.nav &&
         a.initial_units == b.initial_units && a.deaths == b.deaths && a.movements == b.movements &&
         a.turn == b.turn && a.rng == b.rng && a.final_outcome == b.final_outcome && a.vr_offsets == b.vr_offsets;
}

UnitPolicy matrix_policy(AnswerMatrix matrix) {
  return [m = std::move(matrix)](const Unit&, const UnitPerception& p) { return matrix_action(m, p); };
}

bool within_visual_range(const Cell& a, const Cell& b, double phi) {
  return static_cast<double>(squared_distance(a, b)) <= phi * phi;
}

std::vector<Cell> visual_range(const Cell& pos, double phi, const Terrain& terrain) {
  std::vector<Cell> out;
  const int r = static_cast<int>(std::floor(phi));
  for (int y = pos.y - r; y <= pos.y + r; ++y) {
    for (int x = pos.x - r; x <= pos.x + r; ++x) {
      const Cell c{x, y};
      if (terrain.in_bounds(c) && within_visual_range(pos, c, phi)) out.push_back(c);
    }
  }
  return out;
}

namespace {

std::vector<Cell> make_vr_offsets(double phi) {
  std::vector<Cell> out;
  const int r = static_cast<int>(std::floor(phi));
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (within_visual_range({0, 0}, {dx, dy}, phi)) out.push_back({dx, dy});
    }
  }
  return out;
}

void refresh_densest(GameState& s, ArmyKnowledge& k) {
  k.densest_sighting.reset();
  if (k.last_seen_enemies.empty()) return;
  int best = 0;
  for (std::size_t i = 0; i < k.sighting_counts.size(); ++i) {
    if (k.explored[i] && k.sighting_counts[i] > best) {
      best = k.sighting_counts[i];
      k.densest_sighting = s.terrain().cell_at(i);
    }
  }
}

void update_fog(GameState& s) {
  const Terrain& t = s.terrain();
  std::vector<std::uint8_t> sighted(t.size(), 0);
  for (const Army a : {Army::VP, Army::HP}) {
    ArmyKnowledge& k = s.knowledge[army_index(a)];
    const Cell rival_flag = s.flag(rival(a));
    bool sightings_changed = false;

    const int oldest_kept = s.turn - s.config.nav.sighting_window + 1;
    while (!k.last_seen_enemies.empty() && k.last_seen_enemies.front().turn < oldest_kept) {
      --k.sighting_counts[t.index(k.last_seen_enemies.front().cell)];
      k.last_seen_enemies.pop_front();
      sightings_changed = true;
    }

    std::fill(sighted.begin(), sighted.end(), 0);
    for (const Unit& u : s.units) {
      if (!u.alive || u.army != a) continue;
      for (const Cell& off : s.vr_offsets) {
        const Cell c{u.pos.x + off.x, u.pos.y + off.y};
        if (!t.in_bounds(c)) continue;
        const std::size_t idx = t.index(c);
        if (!k.explored[idx]) {
          k.explored[idx] = 1;
          ++k.explored_count;
        }
        if (!k.enemy_flag_known && c == rival_flag) k.enemy_flag_known = c;
        const int other = s.occupancy[idx];
        if (other >= 0 && s.units[static_cast<std::size_t>(other)].army != a && !sighted[idx]) {
          sighted[idx] = 1;
          k.last_seen_enemies.push_back({c, s.turn});
          ++k.sighting_counts[idx];
          sightings_changed = true;
        }
      }
    }
    if (sightings_changed) refresh_densest(s, k);
  }
}

Outcome tally(const GameState& s, Winner winner, OutcomeReason reason) {
  Outcome o;
  o.winner = winner;
  o.reason = reason;
  o.deaths_hp = s.deaths[army_index(Army::HP)];
  o.deaths_vp = s.deaths[army_index(Army::VP)];
  o.movements = s.movements[0] + s.movements[1];
  o.turns = s.turn;
  return o;
}

Outcome damage_tiebreak(const GameState& s) {
  // The army that inflicted more deaths wins.
  const int hp_dead = s.deaths[army_index(Army::HP)];
  const int vp_dead = s.deaths[army_index(Army::VP)];
  if (hp_dead > vp_dead) return tally(s, Winner::VP, OutcomeReason::DamageTiebreak);
  if (vp_dead > hp_dead) return tally(s, Winner::HP, OutcomeReason::DamageTiebreak);
  return tally(s, Winner::Draw, OutcomeReason::Draw);
}

void apply_damage(Unit& u, DamageStat stat, int amount) {
  int& v = stat == DamageStat::Health ? u.health : u.energy;
  v = std::max(0, v - amount);
}

}  // namespace

GameState spawn_game(MapPtr map, const WorldConfig& config, std::uint64_t seed) {
  if (!map) throw std::invalid_argument("spawn_game: null map");
  config.validate();
  validate_map(*map);

  GameState s;
  s.map = std::move(map);
  s.config = config;
  s.rng = Rng(seed);
  s.vr_offsets = make_vr_offsets(config.visual_range_phi);

  const Terrain& t = s.terrain();
  s.occupancy.assign(t.size(), -1);
  for (auto& k : s.knowledge) {
    k.explored.assign(t.size(), 0);
    k.sighting_counts.assign(t.size(), 0);
  }
  for (auto& p : s.pheromone) p.assign(t.size(), 0.0);

  const auto& vp = s.map->spawn_cells(Army::VP);
  const auto& hp = s.map->spawn_cells(Army::HP);
  auto add_unit = [&](Army a, const Cell& c) {
    Unit u;
    u.id = static_cast<int>(s.units.size());
    u.army = a;
    u.pos = c;
    u.health = config.max_health;
    u.energy = config.max_energy;
    u.current_order = Action::Explore;
    s.occupancy[t.index(c)] = u.id;
    s.units.push_back(u);
  };
  for (std::size_t i = 0; i < std::max(vp.size(), hp.size()); ++i) {
    if (i < vp.size()) add_unit(Army::VP, vp[i]);
    if (i < hp.size()) add_unit(Army::HP, hp[i]);
  }
  s.initial_units = {static_cast<int>(vp.size()), static_cast<int>(hp.size())};
  s.nav.assign(s.units.size(), nav::NavContext{});
  update_fog(s);
  return s;
}

UnitPerception perceive(const GameState& s, const Unit& u) {
  if (!u.alive) throw std::logic_error("perceive: unit " + std::to_string(u.id) + " is dead");
  const Terrain& t = s.terrain();
  UnitPerception p;
  p.health = health_level(u.health, s.config.max_health);

  int mates = 0;
  int rivals = 0;
  for (const Cell& off : s.vr_offsets) {
    const Cell c{u.pos.x + off.x, u.pos.y + off.y};
    if (!t.in_bounds(c)) continue;
    const int id = s.occupancy[t.index(c)];
    if (id < 0 || id == u.id) continue;
    if (s.units[static_cast<std::size_t>(id)].army == u.army) {
      ++mates;
    } else {
      ++rivals;
    }
  }
  p.advantage = mates > rivals;

  for (int d = 0; d < 8; ++d) {
    const Cell c = step_towards(u.pos, d);
    if (!t.in_bounds(c)) continue;
    const int id = s.occupancy[t.index(c)];
    if (id >= 0 && s.units[static_cast<std::size_t>(id)].army != u.army) {
      p.under_attack = true;
      break;
    }
  }

  if (s.config.objective_sense == ObjectiveSense::ArmyKnowledge) {
    p.objective_visible = s.knowledge[army_index(u.army)].enemy_flag_known.has_value();
  } else {
    p.objective_visible = within_visual_range(u.pos, s.flag(rival(u.army)), s.config.visual_range_phi);
  }
  return p;
}

std::optional<Outcome> game_outcome(const GameState& s) {
  if (s.final_outcome) return s.final_outcome;
  if (s.turn >= s.config.max_turns) return damage_tiebreak(s);
  return std::nullopt;
}

TurnReport step_turn(GameState& s, std::span<const GroupOrder> hp_orders, const UnitPolicy& vp_policy,
                     const UnitPolicy* hp_policy) {
  if (game_outcome(s)) throw std::logic_error("step_turn: game already decided");
  const Terrain& t = s.terrain();
  TurnReport report;
  report.turn = s.turn;

  // 1. human-side group orders
  for (const GroupOrder& order : hp_orders) {
    for (const int id : order.unit_ids) {
      Event e;
      e.kind = EventKind::OrderRejected;
      e.unit_id = id;
      e.action = order.action;
      if (id < 0 || id >= static_cast<int>(s.units.size())) {
        e.reason = "unknown unit";
      } else if (s.units[static_cast<std::size_t>(id)].army != Army::HP) {
        e.reason = "foreign unit";
      } else if (!s.units[static_cast<std::size_t>(id)].alive) {
        e.reason = "dead unit";
      } else {
        Unit& u = s.units[static_cast<std::size_t>(id)];
        e.kind = EventKind::Order;
        e.state = state_index(perceive(s, u)).value();
        u.current_order = order.action;
      }
      report.events.push_back(std::move(e));
    }
  }

  // 2. per-unit controllers
  for (Unit& u : s.units) {
    if (!u.alive) continue;
    const UnitPolicy* policy = u.army == Army::VP ? &vp_policy : hp_policy;
    if (policy && *policy) u.current_order = (*policy)(u, perceive(s, u));
  }

  // 3. movement
  std::vector<nav::Traversal> traversals;
  for (Unit& u : s.units) {
    if (!u.alive) continue;
    const nav::MoveTarget target = nav::action_target(s, u);
    nav::MoveDecision d;
    switch (target.kind) {
      case nav::TargetKind::Stay: break;
      case nav::TargetKind::RandomWalk: d = nav::random_step(s, u); break;
      case nav::TargetKind::Cell:
        d = nav::plan_step(s.nav[static_cast<std::size_t>(u.id)], s, u, target.cell);
        break;
    }
    if (!d.step || !nav::is_legal_step(s, *d.step)) continue;

    const Cell from = u.pos;
    const Cell to = *d.step;
    s.occupancy[t.index(from)] = -1;
    s.occupancy[t.index(to)] = u.id;
    u.pos = to;
    ++s.movements[army_index(u.army)];
    if (t.at(to) == TerrainType::SemiImpassable) {
      u.energy = std::max(0, u.energy - s.config.semi_impassable_energy_cost);
    }
    if (target.kind == nav::TargetKind::Cell &&
        squared_distance(to, target.cell) < squared_distance(from, target.cell)) {
      traversals.push_back({u.army, from});
    }
    Event e;
    e.kind = EventKind::Move;
    e.unit_id = u.id;
    e.from = from;
    e.to = to;
    report.events.push_back(e);
  }
  nav::pheromone_update(s, traversals);

  // 4. combat, one round per adjacent enemy pair in (min id, max id) order
  std::vector<std::pair<int, int>> pairs;
  for (const Unit& u : s.units) {
    if (!u.alive) continue;
    for (int d = 0; d < 8; ++d) {
      const Cell c = step_towards(u.pos, d);
      if (!t.in_bounds(c)) continue;
      const int other = s.occupancy[t.index(c)];
      if (other > u.id && s.units[static_cast<std::size_t>(other)].army != u.army) pairs.emplace_back(u.id, other);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  for (const auto& [a, b] : pairs) {
    double draw_a = s.rng.uniform01();
    double draw_b = s.rng.uniform01();
    while (draw_a == draw_b) {
      draw_a = s.rng.uniform01();
      draw_b = s.rng.uniform01();
    }
    const int loser = draw_a < draw_b ? a : b;
    const int winner = loser == a ? b : a;
    apply_damage(s.units[static_cast<std::size_t>(loser)], s.config.combat_damage_stat, s.config.combat_damage);
    Event e;
    e.kind = EventKind::Combat;
    e.unit_id = loser;
    e.other_id = winner;
    e.damage = s.config.combat_damage;
    report.events.push_back(e);
  }

  // 5. deaths
  for (Unit& u : s.units) {
    if (!u.alive || (u.health > 0 && u.energy > 0)) continue;
    u.alive = false;
    s.occupancy[t.index(u.pos)] = -1;
    ++s.deaths[army_index(u.army)];
    Event e;
    e.kind = EventKind::Death;
    e.unit_id = u.id;
    e.from = u.pos;
    report.events.push_back(e);
  }

  // 6. fog of war
  update_fog(s);

  // 7. flag capture
  std::array<bool, 2> captured{false, false};
  for (const Unit& u : s.units) {
    if (!u.alive || u.pos != s.flag(rival(u.army))) continue;
    captured[army_index(u.army)] = true;
    Event e;
    e.kind = EventKind::Capture;
    e.unit_id = u.id;
    e.to = u.pos;
    report.events.push_back(e);
  }

  // 8. next turn
  ++s.turn;
  if (captured[0] && captured[1]) {
    s.final_outcome = damage_tiebreak(s);
  } else if (captured[0] || captured[1]) {
    s.final_outcome = tally(s, captured[army_index(Army::VP)] ? Winner::VP : Winner::HP, OutcomeReason::FlagCaptured);
  } else if (s.turn >= s.config.max_turns) {
    s.final_outcome = damage_tiebreak(s);
  }
  report.outcome = s.final_outcome;
  return report;
}

}  // namespace wrts
