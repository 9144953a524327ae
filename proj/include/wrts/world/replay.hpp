#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "wrts/world/engine.hpp"

namespace wrts {

nlohmann::json event_to_json(const Event& e);
nlohmann::json outcome_to_json(const Outcome& o);
Outcome outcome_from_json(const nlohmann::json& j);

/// One replay line: {"turn":t,"events":[...]}. The deciding turn carries a
/// trailing {"kind":"outcome",...} event.
std::string turn_report_line(const TurnReport& report);

/// Full state dump used for determinism checks.
nlohmann::json serialize_state(const GameState& state);

/// Writes a JSONL replay and keeps a running FNV-1a hash of its lines.
class ReplayWriter {
 public:
  ReplayWriter() = default;  // hash only
  explicit ReplayWriter(const std::filesystem::path& path);

  void write(const TurnReport& report);
  std::uint64_t hash() const { return hash_; }
  int lines() const { return lines_; }

 private:
  std::ofstream out_;
  std::uint64_t hash_ = 14695981039346656037ULL;
  int lines_ = 0;
};

struct ReplayTurn {
  int turn = 0;
  nlohmann::json events;
};

/// Throws ArtifactError (Malformed, with the 1-based line number) on bad input.
std::vector<ReplayTurn> load_replay(const std::filesystem::path& path);

}  // namespace wrts
