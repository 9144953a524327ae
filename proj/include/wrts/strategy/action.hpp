#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace wrts {

/// The six orders a unit can carry out. Serialised as the integers 1..6.
enum class Action : std::uint8_t {
  MoveForwardEnemy = 1,
  GroupRunAway = 2,
  MoveForwardObjective = 3,
  NoOperation = 4,
  Explore = 5,
  ProtectFlag = 6,
};

inline constexpr int kActionCount = 6;

inline constexpr std::array<Action, kActionCount> kAllActions = {
    Action::MoveForwardEnemy, Action::GroupRunAway, Action::MoveForwardObjective,
    Action::NoOperation,      Action::Explore,      Action::ProtectFlag,
};

inline constexpr int action_number(Action a) { return static_cast<int>(a); }

/// Zero-based slot (0..5) used for count tables.
inline constexpr std::size_t action_slot(Action a) { return static_cast<std::size_t>(a) - 1; }

inline constexpr std::optional<Action> action_from_int(long long v) {
  if (v < 1 || v > kActionCount) return std::nullopt;
  return static_cast<Action>(v);
}

std::string_view action_name(Action a);

}  // namespace wrts
