#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace wrts {

enum class DamageStat { Health, Energy };

/// How a unit decides whether the rival flag is "visible".
enum class ObjectiveSense {
  ArmyKnowledge,   // the army has ever sensed the flag
  UnitVisibility,  // the flag lies inside this unit's own visual range
};

struct NavConfig {
  int stall_threshold = 3;
  double pheromone_weight = 0.1;
  double deposit = 1.0;
  double evaporation = 0.01;
  double pheromone_cap = 100.0;
  int sighting_window = 50;
  int guard_radius = 3;

  friend bool operator==(const NavConfig&, const NavConfig&) = default;
};

struct WorldConfig {
  double visual_range_phi = 5.0;
  int max_health = 100;
  int max_energy = 1000;
  int semi_impassable_energy_cost = 1;
  int combat_damage = 1;
  int max_turns = 10000;
  DamageStat combat_damage_stat = DamageStat::Health;
  ObjectiveSense objective_sense = ObjectiveSense::ArmyKnowledge;
  NavConfig nav;

  /// Throws ConfigError when a field is out of range.
  void validate() const;

  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

/// Keys are the field names; navigation keys use the "nav." prefix.
WorldConfig parse_world_config(std::string_view text);
WorldConfig load_world_config(const std::filesystem::path& path);
std::string world_config_to_text(const WorldConfig& cfg);

}  // namespace wrts
