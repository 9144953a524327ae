#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wrts/pmea/pmea.hpp"

namespace wrts::pmea {

enum class Algorithm { RBP, PMEA };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(std::string_view name);

struct ExperimentMap {
  std::string name;
  MapPtr map;
};

struct ExperimentConfig {
  std::vector<ExperimentMap> maps;
  std::vector<Algorithm> algorithms{Algorithm::RBP, Algorithm::PMEA};
  int games = 20;
  std::string persona = "drifter(5)";
  std::uint64_t seed = 0;
  WorldConfig world;
  evo::EAConfig ea;
  ModelMode model_mode = ModelMode::PerGame;
  std::filesystem::path output_dir;  // PMEA round artifacts and raw records; empty keeps nothing
  int threads = 1;                   // independent cells run concurrently
};

/// One on-line game of the experiment.
struct GameRecord {
  std::string map;
  Algorithm algorithm = Algorithm::RBP;
  int game = 0;  // 1-based, also the PMEA round
  std::uint64_t seed = 0;
  Outcome outcome;
  double seconds = 0.0;

  friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

nlohmann::json record_to_json(const GameRecord& r);
GameRecord record_from_json(const nlohmann::json& j);

struct ReportRow {
  std::string map;
  Algorithm algorithm = Algorithm::RBP;
  int games = 0;
  int vp_wins = 0;
  int hp_wins = 0;
  int draws = 0;
  double hp_deaths = 0.0;  // means per game
  double vp_deaths = 0.0;
  double movements = 0.0;
  double minutes = 0.0;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<GameRecord> records;
};

/// Rows in order of first appearance of each (map, algorithm) pair.
ExperimentReport make_report(std::vector<GameRecord> records);

/// map,algorithm,VP_win,HP_win,draws,HP_death,VP_death,mov,time
std::string report_csv(const ExperimentReport& report);

nlohmann::json report_to_json(const ExperimentReport& report);
ExperimentReport report_from_json(const nlohmann::json& j);
void save_report(const std::filesystem::path& path, const ExperimentReport& report);
ExperimentReport load_report(const std::filesystem::path& path);

/// JSONL, one GameRecord per line. Throws ArtifactError with the line number.
void save_records(const std::filesystem::path& path, const std::vector<GameRecord>& records);
std::vector<GameRecord> load_records(const std::filesystem::path& path);

/// RBP plays `games` games of rbp_default against the persona; PMEA runs
/// run_pmea with rounds = games. Both use the same per-game seeds on a map.
ExperimentReport run_experiment(const ExperimentConfig& cfg,
                                const std::function<void(const GameRecord&)>& on_record = {});

/// VP wins in the first and second half of the games of one cell.
struct HalfWins {
  int first = 0;
  int second = 0;
};
HalfWins half_wins(const std::vector<GameRecord>& records, const std::string& map, Algorithm algorithm);

}  // namespace wrts::pmea
