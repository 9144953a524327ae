#pragma once

#include <cstdint>
#include <optional>

#include "wrts/common/cell.hpp"

namespace wrts::nav {

enum class NavMode : std::uint8_t { Direct, WallFollow };
enum class Hand : std::uint8_t { Left, Right };

/// Per-unit navigation memory carried between turns.
struct NavContext {
  NavMode mode = NavMode::Direct;
  Hand hand = Hand::Left;
  Cell entry_cell{};
  Cell target_at_entry{};
  int entry_distance2 = 0;  // squared distance to target when wall following started
  int heading = 0;          // direction index of the last wall-following step
  int follow_steps = 0;

  std::optional<Cell> target;  // target the stall bookkeeping refers to
  int best_distance2 = 0;      // closest squared distance reached for `target`
  int stall_counter = 0;       // turns since best_distance2 last improved

  friend bool operator==(const NavContext&, const NavContext&) = default;
};

enum class MoveReason : std::uint8_t { Greedy, AngleSweep, WallFollow, Pheromone, Random, Blocked };

/// One step: a neighbour cell, or nullopt to stay in place.
struct MoveDecision {
  std::optional<Cell> step;
  MoveReason reason = MoveReason::Blocked;
};

}  // namespace wrts::nav
