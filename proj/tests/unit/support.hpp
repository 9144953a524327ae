#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "wrts/world/engine.hpp"
#include "wrts/world/terrain.hpp"

namespace wrts::fixtures {

inline std::filesystem::path data_path(std::string_view rel) { return std::filesystem::path(WRTS_DATA_DIR) / rel; }

inline MapPtr map_from_text(std::string_view text) { return std::make_shared<const MapData>(load_map(text)); }

inline MapPtr map_fixture(std::string_view rel) {
  return std::make_shared<const MapData>(load_map_file(data_path(rel)));
}

/// Fresh directory under the system temp dir, emptied first.
inline std::filesystem::path scratch_dir(std::string_view name) {
  const auto dir = std::filesystem::temp_directory_path() / ("wrts_test_" + std::string(name));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline UnitPolicy constant_policy(Action a) {
  return [a](const Unit&, const UnitPerception&) { return a; };
}

}  // namespace wrts::fixtures
