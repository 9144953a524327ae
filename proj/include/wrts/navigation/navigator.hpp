#pragma once

#include <span>
#include <vector>

#include "wrts/navigation/nav_types.hpp"
#include "wrts/world/game_state.hpp"

namespace wrts::nav {

enum class TargetKind { Cell, RandomWalk, Stay };

struct MoveTarget {
  TargetKind kind = TargetKind::Stay;
  Cell cell{};

  friend bool operator==(const MoveTarget&, const MoveTarget&) = default;
};

/// Where the unit's current order wants it to go this turn.
///
///   MoveForwardEnemy     nearest living rival in visual range (ties: lowest
///                        id), else the army's densest recent-sighting cell,
///                        else a random walk
///   GroupRunAway         centroid of living mates in visual range, rounded
///                        to the nearest walkable cell, else the own flag
///   MoveForwardObjective the rival flag if the army knows it, else random
///   NoOperation          stay
///   Explore              nearest unexplored cell (ties: row-major), else stay
///   ProtectFlag          the own flag while farther than guard_radius
///                        (Chebyshev), else the next corner clockwise of the
///                        guard ring around it
MoveTarget action_target(const GameState& state, const Unit& unit);

/// Layered local planner: greedy descent with a pheromone bias, then an angle
/// sweep of +-45 and +-90 degrees off the bearing, then contour following once
/// the unit has stalled for stall_threshold turns. Updates ctx as if the
/// returned step is taken.
MoveDecision plan_step(NavContext& ctx, const GameState& state, const Unit& unit, const Cell& target);

/// Uniform choice among legal neighbour steps, drawn from the game RNG.
MoveDecision random_step(GameState& state, const Unit& unit);

/// In bounds, not Impassable and not occupied by a living unit.
bool is_legal_step(const GameState& state, const Cell& c);

struct Traversal {
  Army army = Army::VP;
  Cell vacated{};
};

/// Deposits on cells vacated by progressing units, then evaporates every
/// cell and clamps to [0, pheromone_cap].
void pheromone_update(GameState& state, std::span<const Traversal> traversals);

}  // namespace wrts::nav
