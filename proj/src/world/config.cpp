#include "wrts/world/config.hpp"

#include <cmath>
#include <sstream>

#include "wrts/common/kv_config.hpp"

namespace wrts {

void WorldConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("world config: ") + what + " must be strictly positive");
  };
  require(std::isfinite(visual_range_phi) && visual_range_phi > 0, "visual_range_phi");
  require(max_health > 0, "max_health");
  require(max_energy > 0, "max_energy");
  require(semi_impassable_energy_cost > 0, "semi_impassable_energy_cost");
  require(combat_damage > 0, "combat_damage");
  require(max_turns > 0, "max_turns");
  require(nav.stall_threshold > 0, "nav.stall_threshold");
  require(nav.pheromone_weight >= 0, "nav.pheromone_weight");
  require(nav.deposit > 0, "nav.deposit");
  require(nav.evaporation > 0 && nav.evaporation < 1, "nav.evaporation");
  require(nav.pheromone_cap > 0, "nav.pheromone_cap");
  require(nav.sighting_window > 0, "nav.sighting_window");
  require(nav.guard_radius > 0, "nav.guard_radius");
}

WorldConfig parse_world_config(std::string_view text) {
  WorldConfig cfg;
  for (const auto& [key, value] : parse_key_values(text)) {
    if (key == "visual_range_phi") {
      cfg.visual_range_phi = parse_real(key, value);
    } else if (key == "max_health") {
      cfg.max_health = parse_int(key, value);
    } else if (key == "max_energy") {
      cfg.max_energy = parse_int(key, value);
    } else if (key == "semi_impassable_energy_cost") {
      cfg.semi_impassable_energy_cost = parse_int(key, value);
    } else if (key == "combat_damage") {
      cfg.combat_damage = parse_int(key, value);
    } else if (key == "max_turns") {
      cfg.max_turns = parse_int(key, value);
    } else if (key == "combat_damage_stat") {
      if (value == "Health") {
        cfg.combat_damage_stat = DamageStat::Health;
      } else if (value == "Energy") {
        cfg.combat_damage_stat = DamageStat::Energy;
      } else {
        throw ConfigError("combat_damage_stat must be Health or Energy");
      }
    } else if (key == "objective_sense") {
      if (value == "ArmyKnowledge") {
        cfg.objective_sense = ObjectiveSense::ArmyKnowledge;
      } else if (value == "UnitVisibility") {
        cfg.objective_sense = ObjectiveSense::UnitVisibility;
      } else {
        throw ConfigError("objective_sense must be ArmyKnowledge or UnitVisibility");
      }
    } else if (key == "nav.stall_threshold") {
      cfg.nav.stall_threshold = parse_int(key, value);
    } else if (key == "nav.pheromone_weight") {
      cfg.nav.pheromone_weight = parse_real(key, value);
    } else if (key == "nav.deposit") {
      cfg.nav.deposit = parse_real(key, value);
    } else if (key == "nav.evaporation") {
      cfg.nav.evaporation = parse_real(key, value);
    } else if (key == "nav.pheromone_cap") {
      cfg.nav.pheromone_cap = parse_real(key, value);
    } else if (key == "nav.sighting_window") {
      cfg.nav.sighting_window = parse_int(key, value);
    } else if (key == "nav.guard_radius") {
      cfg.nav.guard_radius = parse_int(key, value);
    } else {
      throw ConfigError("unknown world config key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

WorldConfig load_world_config(const std::filesystem::path& path) { return parse_world_config(read_text_file(path)); }

std::string world_config_to_text(const WorldConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  out << "visual_range_phi = " << cfg.visual_range_phi << '\n'
      << "max_health = " << cfg.max_health << '\n'
      << "max_energy = " << cfg.max_energy << '\n'
      << "semi_impassable_energy_cost = " << cfg.semi_impassable_energy_cost << '\n'
      << "combat_damage = " << cfg.combat_damage << '\n'
      << "max_turns = " << cfg.max_turns << '\n'
      << "combat_damage_stat = " << (cfg.combat_damage_stat == DamageStat::Health ? "Health" : "Energy") << '\n'
      << "objective_sense = "
      << (cfg.objective_sense == ObjectiveSense::ArmyKnowledge ? "ArmyKnowledge" : "UnitVisibility") << '\n'
      << "nav.stall_threshold = " << cfg.nav.stall_threshold << '\n'
      << "nav.pheromone_weight = " << cfg.nav.pheromone_weight << '\n'
      << "nav.deposit = " << cfg.nav.deposit << '\n'
      << "nav.evaporation = " << cfg.nav.evaporation << '\n'
      << "nav.pheromone_cap = " << cfg.nav.pheromone_cap << '\n'
      << "nav.sighting_window = " << cfg.nav.sighting_window << '\n'
      << "nav.guard_radius = " << cfg.nav.guard_radius << '\n';
  return out.str();
}

}  // namespace wrts
