#include "wrts/navigation/navigator.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace wrts::nav {

namespace {

/// Direction index (0..7) closest to the vector from -> to.
int bearing(const Cell& from, const Cell& to) {
  const double angle = std::atan2(static_cast<double>(to.y - from.y), static_cast<double>(to.x - from.x));
  const long octant = std::lround(angle / (std::numbers::pi / 4.0));
  return wrap_direction(static_cast<int>(octant));
}

/// Visits the cells at Chebyshev distance exactly r from centre.
template <typename Fn>
void for_each_on_ring(const Cell& centre, int r, Fn&& fn) {
  if (r == 0) {
    fn(centre);
    return;
  }
  for (int x = centre.x - r; x <= centre.x + r; ++x) {
    fn(Cell{x, centre.y - r});
    fn(Cell{x, centre.y + r});
  }
  for (int y = centre.y - r + 1; y <= centre.y + r - 1; ++y) {
    fn(Cell{centre.x - r, y});
    fn(Cell{centre.x + r, y});
  }
}

/// Nearest cell (Euclidean, ties row-major) satisfying pred.
template <typename Pred>
std::optional<Cell> nearest_cell(const Terrain& t, const Cell& centre, Pred&& pred) {
  std::optional<Cell> best;
  int best_d2 = std::numeric_limits<int>::max();
  const int max_r = std::max({centre.x, centre.y, t.width() - 1 - centre.x, t.height() - 1 - centre.y});
  for (int r = 0; r <= max_r; ++r) {
    if (best && r * r > best_d2) break;
    for_each_on_ring(centre, r, [&](const Cell& c) {
      if (!t.in_bounds(c) || !pred(c)) return;
      const int d2 = squared_distance(centre, c);
      if (d2 < best_d2 || (d2 == best_d2 && row_major_less(c, *best))) {
        best = c;
        best_d2 = d2;
      }
    });
  }
  return best;
}

Cell nearest_walkable(const Terrain& t, const Cell& c) {
  const Cell clamped{std::clamp(c.x, 0, t.width() - 1), std::clamp(c.y, 0, t.height() - 1)};
  if (t.walkable(clamped)) return clamped;
  return nearest_cell(t, clamped, [&](const Cell& x) { return t.walkable(x); }).value_or(clamped);
}

Cell guard_waypoint(const GameState& s, const Unit& u, const Cell& flag) {
  const int r = s.config.nav.guard_radius;
  // Corners clockwise on screen, with their screen angle in degrees.
  const std::array<std::pair<Cell, double>, 4> corners = {{
      {{flag.x + r, flag.y - r}, 315.0},
      {{flag.x + r, flag.y + r}, 45.0},
      {{flag.x - r, flag.y + r}, 135.0},
      {{flag.x - r, flag.y - r}, 225.0},
  }};
  double here = 0.0;
  if (u.pos != flag) {
    here = std::atan2(static_cast<double>(u.pos.y - flag.y), static_cast<double>(u.pos.x - flag.x)) * 180.0 /
           std::numbers::pi;
    if (here < 0) here += 360.0;
  }
  const Cell* next = &corners[0].first;
  double best_gap = 361.0;
  for (const auto& [corner, angle] : corners) {
    double gap = std::fmod(angle - here + 360.0, 360.0);
    if (gap < 1e-9) gap += 360.0;  // standing on a corner: move on to the next one
    if (gap < best_gap) {
      best_gap = gap;
      next = &corner;
    }
  }
  return nearest_walkable(s.terrain(), *next);
}

struct GreedyChoice {
  std::optional<Cell> cell;
  MoveReason reason = MoveReason::Greedy;
};

GreedyChoice greedy_step(const GameState& s, const Unit& u, const Cell& target) {
  const Cell cur = u.pos;
  const int d0 = squared_distance(cur, target);
  const double root0 = std::sqrt(static_cast<double>(d0));
  const auto& pher = s.pheromone[army_index(u.army)];
  const double weight = s.config.nav.pheromone_weight;

  GreedyChoice out;
  double best_score = -std::numeric_limits<double>::infinity();
  double best_reduction = -std::numeric_limits<double>::infinity();
  std::optional<Cell> pure_best;
  for (int d = 0; d < 8; ++d) {
    const Cell c = step_towards(cur, d);
    if (!is_legal_step(s, c)) continue;
    const int d2 = squared_distance(c, target);
    if (d2 >= d0) continue;
    const double reduction = root0 - std::sqrt(static_cast<double>(d2));
    const double score = reduction + weight * pher[s.terrain().index(c)];
    if (score > best_score) {
      best_score = score;
      out.cell = c;
    }
    if (reduction > best_reduction) {
      best_reduction = reduction;
      pure_best = c;
    }
  }
  if (out.cell && out.cell != pure_best) out.reason = MoveReason::Pheromone;
  return out;
}

/// First legal direction scanning from `start` in steps of `delta` (+1
/// clockwise, -1 counter-clockwise), at most `count` directions.
std::optional<int> first_legal(const GameState& s, const Cell& from, int start, int delta, int count) {
  for (int k = 0; k < count; ++k) {
    const int d = wrap_direction(start + k * delta);
    if (is_legal_step(s, step_towards(from, d))) return d;
  }
  return std::nullopt;
}

/// Contour step keeping the obstacle on the chosen hand: try the sharpest
/// turn towards that hand first, then sweep away from it.
std::optional<int> follow_direction(const GameState& s, const Cell& from, int heading, Hand hand) {
  if (hand == Hand::Left) return first_legal(s, from, heading - 2, +1, 8);
  return first_legal(s, from, heading + 2, -1, 8);
}

void reset_context(NavContext& ctx, const Cell& target, int d0) {
  ctx = NavContext{};
  ctx.target = target;
  ctx.best_distance2 = d0;
}

}  // namespace

bool is_legal_step(const GameState& s, const Cell& c) { return s.terrain().walkable(c) && s.unit_at(c) < 0; }

MoveTarget action_target(const GameState& s, const Unit& u) {
  const Terrain& t = s.terrain();
  const ArmyKnowledge& k = s.knowledge[army_index(u.army)];
  switch (u.current_order) {
    case Action::MoveForwardEnemy: {
      int best_id = -1;
      int best_d2 = 0;
      for (const Cell& off : s.vr_offsets) {
        const Cell c{u.pos.x + off.x, u.pos.y + off.y};
        if (!t.in_bounds(c)) continue;
        const int id = s.occupancy[t.index(c)];
        if (id < 0 || s.units[static_cast<std::size_t>(id)].army == u.army) continue;
        const int d2 = off.x * off.x + off.y * off.y;
        if (best_id < 0 || d2 < best_d2 || (d2 == best_d2 && id < best_id)) {
          best_id = id;
          best_d2 = d2;
        }
      }
      if (best_id >= 0) return {TargetKind::Cell, s.units[static_cast<std::size_t>(best_id)].pos};
      if (k.densest_sighting) return {TargetKind::Cell, *k.densest_sighting};
      return {TargetKind::RandomWalk, {}};
    }
    case Action::GroupRunAway: {
      long sx = 0;
      long sy = 0;
      int n = 0;
      for (const Cell& off : s.vr_offsets) {
        const Cell c{u.pos.x + off.x, u.pos.y + off.y};
        if (!t.in_bounds(c)) continue;
        const int id = s.occupancy[t.index(c)];
        if (id < 0 || id == u.id || s.units[static_cast<std::size_t>(id)].army != u.army) continue;
        sx += c.x;
        sy += c.y;
        ++n;
      }
      if (n == 0) return {TargetKind::Cell, s.flag(u.army)};
      const Cell centroid{static_cast<int>(std::lround(static_cast<double>(sx) / n)),
                          static_cast<int>(std::lround(static_cast<double>(sy) / n))};
      return {TargetKind::Cell, nearest_walkable(t, centroid)};
    }
    case Action::MoveForwardObjective:
      if (k.enemy_flag_known) return {TargetKind::Cell, *k.enemy_flag_known};
      return {TargetKind::RandomWalk, {}};
    case Action::NoOperation:
      return {TargetKind::Stay, {}};
    case Action::Explore: {
      if (k.explored_count >= static_cast<int>(t.size())) return {TargetKind::Stay, {}};
      const auto c = nearest_cell(t, u.pos, [&](const Cell& x) { return k.explored[t.index(x)] == 0; });
      if (!c) return {TargetKind::Stay, {}};
      return {TargetKind::Cell, *c};
    }
    case Action::ProtectFlag: {
      const Cell& flag = s.flag(u.army);
      if (chebyshev_distance(u.pos, flag) > s.config.nav.guard_radius) return {TargetKind::Cell, flag};
      return {TargetKind::Cell, guard_waypoint(s, u, flag)};
    }
  }
  return {TargetKind::Stay, {}};
}

MoveDecision plan_step(NavContext& ctx, const GameState& s, const Unit& u, const Cell& target) {
  const Cell cur = u.pos;
  const int d0 = squared_distance(cur, target);
  if (!ctx.target || chebyshev_distance(*ctx.target, target) > 2) {
    reset_context(ctx, target, d0);
  } else {
    ctx.target = target;
  }

  if (cur == target) return {std::nullopt, MoveReason::Greedy};
  // Next to an occupied or impassable target: nothing better is reachable.
  if (chebyshev_distance(cur, target) == 1 && !is_legal_step(s, target)) return {std::nullopt, MoveReason::Greedy};

  const GreedyChoice greedy = greedy_step(s, u, target);
  MoveDecision decision;

  if (ctx.mode == NavMode::WallFollow) {
    if (greedy.cell && d0 < ctx.entry_distance2) {
      ctx.mode = NavMode::Direct;
      decision = {greedy.cell, greedy.reason};
    } else {
      const auto dir = follow_direction(s, cur, ctx.heading, ctx.hand);
      if (dir) {
        const Cell next = step_towards(cur, *dir);
        ++ctx.follow_steps;
        const int loop_limit = 2 * (s.terrain().width() + s.terrain().height());
        if ((next == ctx.entry_cell && ctx.follow_steps > 2) || ctx.follow_steps > loop_limit) {
          // Went all the way round without getting closer: try the other hand.
          ctx.hand = ctx.hand == Hand::Left ? Hand::Right : Hand::Left;
          ctx.follow_steps = 0;
          ctx.entry_cell = cur;
        }
        ctx.heading = *dir;
        decision = {next, MoveReason::WallFollow};
      } else {
        decision = {std::nullopt, MoveReason::Blocked};
      }
    }
  } else if (greedy.cell) {
    decision = {greedy.cell, greedy.reason};
  } else if (ctx.stall_counter >= s.config.nav.stall_threshold) {
    const int b = bearing(cur, target);
    const auto left = first_legal(s, cur, b + 1, +1, 7);   // obstacle kept on the left
    const auto right = first_legal(s, cur, b - 1, -1, 7);  // obstacle kept on the right
    if (!left && !right) {
      decision = {std::nullopt, MoveReason::Blocked};
    } else {
      Hand hand = Hand::Left;
      if (!left || (right && squared_distance(step_towards(cur, *right), target) <
                                 squared_distance(step_towards(cur, *left), target))) {
        hand = Hand::Right;
      }
      const int dir = hand == Hand::Left ? *left : *right;
      ctx.mode = NavMode::WallFollow;
      ctx.hand = hand;
      ctx.entry_cell = cur;
      ctx.target_at_entry = target;
      ctx.entry_distance2 = d0;
      ctx.heading = dir;
      ctx.follow_steps = 1;
      decision = {step_towards(cur, dir), MoveReason::WallFollow};
    }
  } else {
    const int b = bearing(cur, target);
    decision = {std::nullopt, MoveReason::Blocked};
    for (const int rot : {1, -1, 2, -2}) {
      const Cell c = step_towards(cur, b + rot);
      if (is_legal_step(s, c)) {
        decision = {c, MoveReason::AngleSweep};
        break;
      }
    }
  }

  const int reached = squared_distance(decision.step.value_or(cur), target);
  if (reached < ctx.best_distance2) {
    ctx.best_distance2 = reached;
    ctx.stall_counter = 0;
  } else {
    ++ctx.stall_counter;
  }
  return decision;
}

MoveDecision random_step(GameState& s, const Unit& u) {
  std::array<Cell, 8> options{};
  std::size_t n = 0;
  for (int d = 0; d < 8; ++d) {
    const Cell c = step_towards(u.pos, d);
    if (is_legal_step(s, c)) options[n++] = c;
  }
  if (n == 0) return {std::nullopt, MoveReason::Blocked};
  return {options[s.rng.below(n)], MoveReason::Random};
}

void pheromone_update(GameState& s, std::span<const Traversal> traversals) {
  const Terrain& t = s.terrain();
  const NavConfig& cfg = s.config.nav;
  for (const Traversal& tr : traversals) s.pheromone[army_index(tr.army)][t.index(tr.vacated)] += cfg.deposit;
  const double keep = 1.0 - cfg.evaporation;
  for (auto& grid : s.pheromone) {
    for (double& v : grid) v = std::clamp(v * keep, 0.0, cfg.pheromone_cap);
  }
}

}  // namespace wrts::nav
