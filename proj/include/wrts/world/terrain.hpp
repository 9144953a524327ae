#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "wrts/common/cell.hpp"

namespace wrts {

enum class TerrainType : std::uint8_t { Passable, Impassable, SemiImpassable };

/// Rectangular, non-toroidal grid of terrain classes.
class Terrain {
 public:
  Terrain() = default;
  Terrain(int width, int height, std::vector<TerrainType> cells);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return cells_.size(); }

  bool in_bounds(const Cell& c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  std::size_t index(const Cell& c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.x);
  }
  Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  TerrainType at(const Cell& c) const { return cells_[index(c)]; }
  /// In bounds and not Impassable.
  bool walkable(const Cell& c) const { return in_bounds(c) && at(c) != TerrainType::Impassable; }

  friend bool operator==(const Terrain&, const Terrain&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<TerrainType> cells_;
};

/// A loaded map: terrain plus per-army flag cell and spawn cells, indexed by
/// army_index(). Spawn lists are in row-major order.
struct MapData {
  Terrain terrain;
  std::array<Cell, 2> flags{};
  std::array<std::vector<Cell>, 2> spawns;

  const Cell& flag(Army a) const { return flags[army_index(a)]; }
  const std::vector<Cell>& spawn_cells(Army a) const { return spawns[army_index(a)]; }

  friend bool operator==(const MapData&, const MapData&) = default;
};

class MapError : public std::runtime_error {
 public:
  enum class Kind {
    Empty,
    TooSmall,
    NonRectangular,
    UnknownGlyph,
    MissingFlag,
    DuplicateFlag,
    NotPassable,
    NoSpawns,
    OverlappingSpawns,
  };

  MapError(Kind kind, std::string message, int row = -1, int column = -1);

  Kind kind() const { return kind_; }
  int row() const { return row_; }
  int column() const { return column_; }

 private:
  Kind kind_;
  int row_;
  int column_;
};

/// Parses the text map format, one row per line:
///   '.' passable   '#' impassable   '~' semi-impassable
///   'f' HP flag    'F' VP flag      'a' VP spawn     'b' HP spawn
MapData load_map(std::string_view text);
MapData load_map_file(const std::filesystem::path& path);

/// Checks the structural invariants of a programmatically built map.
void validate_map(const MapData& map);

std::string map_to_text(const MapData& map);

using MapPtr = std::shared_ptr<const MapData>;

}  // namespace wrts
