#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>

namespace wrts {

enum class HealthLevel : std::uint8_t { Low = 0, Medium = 1, High = 2 };

/// What a unit senses about its own situation at a turn boundary.
struct UnitPerception {
  HealthLevel health = HealthLevel::High;
  bool advantage = false;          // more living mates than rivals in visual range
  bool under_attack = false;       // a living rival is 8-adjacent
  bool objective_visible = false;  // the rival flag position is known

  friend bool operator==(const UnitPerception&, const UnitPerception&) = default;
};

inline constexpr int kStateCount = 24;

/// Position of a perception in the answer matrix, 0..23.
///
/// Mixed-radix with digits (health, advantage, under_attack,
/// objective_visible) and radices (3, 2, 2, 2); the last digit varies
/// fastest, so index = 8*health + 4*advantage + 2*under_attack + visible.
/// The digit order is part of every on-disk genome and must not change.
class StateIndex {
 public:
  constexpr StateIndex() = default;
  /// Throws std::out_of_range unless 0 <= value < 24.
  explicit StateIndex(int value);

  constexpr int value() const { return value_; }
  friend constexpr auto operator<=>(const StateIndex&, const StateIndex&) = default;

 private:
  int value_ = 0;
};

StateIndex state_index(const UnitPerception& p);
UnitPerception decode_state(StateIndex index);
/// Throws std::out_of_range for values outside 0..23.
UnitPerception decode_state(int index);

HealthLevel health_level(int health, int max_health);

}  // namespace wrts
