#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <functional>

namespace wrts {

/// Grid coordinate. x is the column, y the row (row 0 is the first map line).
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Row-major ordering: earlier rows first, then smaller columns.
inline bool row_major_less(const Cell& a, const Cell& b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

inline int squared_distance(const Cell& a, const Cell& b) {
  const int dx = a.x - b.x;
  const int dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline int chebyshev_distance(const Cell& a, const Cell& b) {
  return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y));
}

enum class Army : std::uint8_t { VP = 0, HP = 1 };

inline constexpr std::size_t army_index(Army a) { return static_cast<std::size_t>(a); }
inline constexpr Army rival(Army a) { return a == Army::VP ? Army::HP : Army::VP; }
inline constexpr const char* army_name(Army a) { return a == Army::VP ? "VP" : "HP"; }

/// The eight neighbour directions, clockwise on screen (y grows downwards),
/// starting east. Rotating by +1 turns 45 degrees clockwise.
inline constexpr std::array<Cell, 8> kDirections = {{
    {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1},
}};

inline constexpr int wrap_direction(int d) { return ((d % 8) + 8) % 8; }

inline Cell step_towards(const Cell& c, int direction) {
  const Cell& d = kDirections[static_cast<std::size_t>(wrap_direction(direction))];
  return {c.x + d.x, c.y + d.y};
}

}  // namespace wrts

template <>
struct std::hash<wrts::Cell> {
  std::size_t operator()(const wrts::Cell& c) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.x)) << 32) |
                                      static_cast<std::uint32_t>(c.y));
  }
};
