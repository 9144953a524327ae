#include "wrts/world/terrain.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

#include "wrts/common/kv_config.hpp"

namespace wrts {

Terrain::Terrain(int width, int height, std::vector<TerrainType> cells)
    : width_(width), height_(height), cells_(std::move(cells)) {
  if (width_ <= 0 || height_ <= 0 || cells_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
    throw std::invalid_argument("terrain dimensions do not match cell count");
  }
}

MapError::MapError(Kind kind, std::string message, int row, int column)
    : std::runtime_error(row >= 0 ? message + " (row " + std::to_string(row) + ", column " + std::to_string(column) + ")"
                                  : message),
      kind_(kind),
      row_(row),
      column_(column) {}

MapData load_map(std::string_view text) {
  std::vector<std::string_view> rows;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    rows.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  // A single trailing newline produces no extra row; anything else is a row.
  if (rows.empty()) throw MapError(MapError::Kind::Empty, "map document is empty");

  const int height = static_cast<int>(rows.size());
  const int width = static_cast<int>(rows.front().size());
  for (int y = 0; y < height; ++y) {
    if (static_cast<int>(rows[static_cast<std::size_t>(y)].size()) != width) {
      throw MapError(MapError::Kind::NonRectangular,
                     "row length " + std::to_string(rows[static_cast<std::size_t>(y)].size()) + " differs from " +
                         std::to_string(width),
                     y, static_cast<int>(rows[static_cast<std::size_t>(y)].size()));
    }
  }

  MapData map;
  std::vector<TerrainType> cells(static_cast<std::size_t>(width) * static_cast<std::size_t>(height),
                                 TerrainType::Passable);
  std::array<std::optional<Cell>, 2> flags;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const char g = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
      const Cell c{x, y};
      auto& slot = cells[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)];
      switch (g) {
        case '.': break;
        case '#': slot = TerrainType::Impassable; break;
        case '~': slot = TerrainType::SemiImpassable; break;
        case 'a': map.spawns[army_index(Army::VP)].push_back(c); break;
        case 'b': map.spawns[army_index(Army::HP)].push_back(c); break;
        case 'f':
        case 'F': {
          const Army owner = g == 'F' ? Army::VP : Army::HP;
          auto& flag = flags[army_index(owner)];
          if (flag) {
            throw MapError(MapError::Kind::DuplicateFlag, std::string("duplicate flag '") + g + "'", y, x);
          }
          flag = c;
          break;
        }
        default:
          throw MapError(MapError::Kind::UnknownGlyph, std::string("unknown glyph '") + g + "'", y, x);
      }
    }
  }
  if (width < 3 || height < 3) {
    throw MapError(MapError::Kind::TooSmall, "map must be at least 3x3");
  }
  for (const Army a : {Army::VP, Army::HP}) {
    if (!flags[army_index(a)]) {
      throw MapError(MapError::Kind::MissingFlag, std::string("missing ") + army_name(a) + " flag");
    }
    map.flags[army_index(a)] = *flags[army_index(a)];
  }
  map.terrain = Terrain(width, height, std::move(cells));
  return map;
}

MapData load_map_file(const std::filesystem::path& path) { return load_map(read_text_file(path)); }

void validate_map(const MapData& map) {
  const Terrain& t = map.terrain;
  if (t.width() < 3 || t.height() < 3) throw MapError(MapError::Kind::TooSmall, "map must be at least 3x3");
  std::unordered_set<Cell> used;
  for (const Army a : {Army::VP, Army::HP}) {
    const Cell f = map.flag(a);
    if (!t.in_bounds(f) || t.at(f) != TerrainType::Passable) {
      throw MapError(MapError::Kind::NotPassable, std::string(army_name(a)) + " flag not on a passable cell", f.y, f.x);
    }
    if (map.spawn_cells(a).empty()) {
      throw MapError(MapError::Kind::NoSpawns, std::string(army_name(a)) + " army has no spawn cells");
    }
    for (const Cell& s : map.spawn_cells(a)) {
      if (!t.in_bounds(s) || t.at(s) != TerrainType::Passable) {
        throw MapError(MapError::Kind::NotPassable, "spawn not on a passable cell", s.y, s.x);
      }
      if (!used.insert(s).second) {
        throw MapError(MapError::Kind::OverlappingSpawns, "overlapping spawn cells", s.y, s.x);
      }
    }
  }
}

std::string map_to_text(const MapData& map) {
  const Terrain& t = map.terrain;
  std::string out;
  out.reserve(t.size() + static_cast<std::size_t>(t.height()));
  for (int y = 0; y < t.height(); ++y) {
    for (int x = 0; x < t.width(); ++x) {
      const Cell c{x, y};
      char g = '.';
      switch (t.at(c)) {
        case TerrainType::Passable: g = '.'; break;
        case TerrainType::Impassable: g = '#'; break;
        case TerrainType::SemiImpassable: g = '~'; break;
      }
      if (c == map.flag(Army::VP)) g = 'F';
      if (c == map.flag(Army::HP)) g = 'f';
      for (const Army a : {Army::VP, Army::HP}) {
        const auto& s = map.spawn_cells(a);
        if (std::find(s.begin(), s.end(), c) != s.end()) g = a == Army::VP ? 'a' : 'b';
      }
      out.push_back(g);
    }
    out.push_back('\n');
  }
  return out;
}

}  // namespace wrts
