#include "wrts/pmea/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>

#include "wrts/common/kv_config.hpp"
#include "wrts/pmea/artifacts.hpp"
#include "wrts/world/replay.hpp"

namespace wrts::pmea {

const char* algorithm_name(Algorithm a) { return a == Algorithm::RBP ? "RBP" : "PMEA"; }

Algorithm algorithm_from_name(std::string_view name) {
  if (name == "RBP") return Algorithm::RBP;
  if (name == "PMEA") return Algorithm::PMEA;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

nlohmann::json record_to_json(const GameRecord& r) {
  return {{"map", r.map},
          {"algorithm", algorithm_name(r.algorithm)},
          {"game", r.game},
          {"seed", r.seed},
          {"outcome", outcome_to_json(r.outcome)},
          {"seconds", r.seconds}};
}

GameRecord record_from_json(const nlohmann::json& j) {
  GameRecord r;
  r.map = j.at("map").get<std::string>();
  r.algorithm = algorithm_from_name(j.at("algorithm").get<std::string>());
  r.game = j.at("game").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.outcome = outcome_from_json(j.at("outcome"));
  r.seconds = j.at("seconds").get<double>();
  return r;
}

ExperimentReport make_report(std::vector<GameRecord> records) {
  ExperimentReport report;
  std::map<std::pair<std::string, Algorithm>, std::size_t> slot;
  for (const GameRecord& r : records) {
    auto [it, inserted] = slot.try_emplace({r.map, r.algorithm}, report.rows.size());
    if (inserted) {
      ReportRow row;
      row.map = r.map;
      row.algorithm = r.algorithm;
      report.rows.push_back(row);
    }
    ReportRow& row = report.rows[it->second];
    ++row.games;
    switch (r.outcome.winner) {
      case Winner::VP: ++row.vp_wins; break;
      case Winner::HP: ++row.hp_wins; break;
      case Winner::Draw: ++row.draws; break;
    }
    row.hp_deaths += r.outcome.deaths_hp;
    row.vp_deaths += r.outcome.deaths_vp;
    row.movements += static_cast<double>(r.outcome.movements);
    row.minutes += r.seconds / 60.0;
  }
  for (ReportRow& row : report.rows) {
    row.hp_deaths /= row.games;
    row.vp_deaths /= row.games;
    row.movements /= row.games;
    row.minutes /= row.games;
  }
  report.records = std::move(records);
  return report;
}

namespace {

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string report_csv(const ExperimentReport& report) {
  std::string out = "map,algorithm,VP_win,HP_win,draws,HP_death,VP_death,mov,time\n";
  for (const ReportRow& r : report.rows) {
    out += r.map + "," + algorithm_name(r.algorithm) + "," + std::to_string(r.vp_wins) + "," +
           std::to_string(r.hp_wins) + "," + std::to_string(r.draws) + "," + format_real(r.hp_deaths) + "," +
           format_real(r.vp_deaths) + "," + format_real(r.movements) + "," + format_real(r.minutes) + "\n";
  }
  return out;
}

nlohmann::json report_to_json(const ExperimentReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& r : report.rows) {
    rows.push_back({{"map", r.map},
                    {"algorithm", algorithm_name(r.algorithm)},
                    {"games", r.games},
                    {"VP_win", r.vp_wins},
                    {"HP_win", r.hp_wins},
                    {"draws", r.draws},
                    {"HP_death", r.hp_deaths},
                    {"VP_death", r.vp_deaths},
                    {"mov", r.movements},
                    {"time", r.minutes}});
  }
  nlohmann::json records = nlohmann::json::array();
  for (const GameRecord& r : report.records) records.push_back(record_to_json(r));
  return {{"format", "experiment-report-v1"}, {"rows", rows}, {"records", records}};
}

ExperimentReport report_from_json(const nlohmann::json& j) {
  ExperimentReport report;
  for (const auto& row : j.at("rows")) {
    ReportRow r;
    r.map = row.at("map").get<std::string>();
    r.algorithm = algorithm_from_name(row.at("algorithm").get<std::string>());
    r.games = row.at("games").get<int>();
    r.vp_wins = row.at("VP_win").get<int>();
    r.hp_wins = row.at("HP_win").get<int>();
    r.draws = row.at("draws").get<int>();
    r.hp_deaths = row.at("HP_death").get<double>();
    r.vp_deaths = row.at("VP_death").get<double>();
    r.movements = row.at("mov").get<double>();
    r.minutes = row.at("time").get<double>();
    report.rows.push_back(r);
  }
  for (const auto& rec : j.at("records")) report.records.push_back(record_from_json(rec));
  return report;
}

void save_report(const std::filesystem::path& path, const ExperimentReport& report) {
  write_json_artifact(path, report_to_json(report));
}

ExperimentReport load_report(const std::filesystem::path& path) {
  const auto doc = read_json_artifact(path, "experiment-report-v1");
  try {
    return report_from_json(doc);
  } catch (const std::exception& e) {
    throw ArtifactError(ArtifactError::Kind::Malformed, path.string() + ": " + e.what());
  }
}

void save_records(const std::filesystem::path& path, const std::vector<GameRecord>& records) {
  std::string text;
  for (const GameRecord& r : records) text += record_to_json(r).dump() + "\n";
  write_text_atomic(path, text);
}

std::vector<GameRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError(ArtifactError::Kind::Missing, "cannot open " + path.string());
  std::vector<GameRecord> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    const auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw ArtifactError(ArtifactError::Kind::Malformed, path.string() + ": bad JSON", number);
    try {
      out.push_back(record_from_json(j));
    } catch (const std::exception& e) {
      throw ArtifactError(ArtifactError::Kind::Malformed, path.string() + ": " + e.what(), number);
    }
  }
  return out;
}

namespace {

struct Job {
  std::size_t map_index;
  Algorithm algorithm;
  int game;  // RBP: one game per job; PMEA: 0, the whole round loop
};

std::string cell_dir_name(const std::string& map, Algorithm a) { return map + "_" + algorithm_name(a); }

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg, const std::function<void(const GameRecord&)>& on_record) {
  if (cfg.games < 1) throw ConfigError("experiment: games must be at least 1");
  if (cfg.maps.empty()) throw ConfigError("experiment: no maps");
  const Persona persona = Persona::parse(cfg.persona);

  std::vector<Job> jobs;
  for (std::size_t m = 0; m < cfg.maps.size(); ++m) {
    for (Algorithm a : cfg.algorithms) {
      if (a == Algorithm::RBP) {
        for (int g = 1; g <= cfg.games; ++g) jobs.push_back({m, a, g});
      } else {
        jobs.push_back({m, a, 0});
      }
    }
  }

  std::mutex mu;
  std::vector<GameRecord> records;
  auto emit = [&](const GameRecord& r) {
    std::lock_guard lock(mu);
    records.push_back(r);
    if (on_record) on_record(r);
  };

  auto run_job = [&](const Job& job) {
    const ExperimentMap& em = cfg.maps[job.map_index];
    const std::uint64_t map_seed = mix_seed(cfg.seed, job.map_index);
    if (job.algorithm == Algorithm::RBP) {
      const std::uint64_t seed = round_game_seed(map_seed, job.game);
      const OnlineGame g = play_game_on(rbp_default(), persona, job.game, em.map, cfg.world, seed);
      emit({em.name, Algorithm::RBP, job.game, seed, g.outcome, g.seconds});
      return;
    }
    PmeaConfig pc;
    pc.rounds = cfg.games;
    pc.map = em.map;
    pc.world = cfg.world;
    pc.ea = cfg.ea;
    pc.model_mode = cfg.model_mode;
    pc.seed = map_seed;
    if (!cfg.output_dir.empty()) pc.output_dir = cfg.output_dir / cell_dir_name(em.name, Algorithm::PMEA);
    PersonaOpponent opponent(persona);
    const PmeaResult res = run_pmea(pc, opponent);
    for (const RoundRecord& r : res.rounds) {
      emit({em.name, Algorithm::PMEA, r.round, r.game_seed, r.outcome, r.game_seconds});
    }
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) run_job(jobs[i]);
  };
  {
    std::vector<std::jthread> pool;
    const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, cfg.threads)), jobs.size());
    for (std::size_t t = 0; t + 1 < n; ++t) pool.emplace_back(worker);
    worker();
  }

  // Scheduling order is not deterministic; report order is.
  std::map<std::string, std::size_t> map_order;
  for (std::size_t m = 0; m < cfg.maps.size(); ++m) map_order.emplace(cfg.maps[m].name, m);
  auto algo_order = [&](Algorithm a) {
    return static_cast<std::size_t>(std::find(cfg.algorithms.begin(), cfg.algorithms.end(), a) - cfg.algorithms.begin());
  };
  std::sort(records.begin(), records.end(), [&](const GameRecord& a, const GameRecord& b) {
    return std::tuple(map_order[a.map], algo_order(a.algorithm), a.game) <
           std::tuple(map_order[b.map], algo_order(b.algorithm), b.game);
  });
  ExperimentReport report = make_report(std::move(records));
  if (!cfg.output_dir.empty()) {
    save_records(cfg.output_dir / "records.jsonl", report.records);
    save_report(cfg.output_dir / "report.json", report);
    write_text_atomic(cfg.output_dir / "report.csv", report_csv(report));
  }
  return report;
}

HalfWins half_wins(const std::vector<GameRecord>& records, const std::string& map, Algorithm algorithm) {
  int games = 0;
  for (const GameRecord& r : records) {
    if (r.map == map && r.algorithm == algorithm) games = std::max(games, r.game);
  }
  HalfWins h;
  for (const GameRecord& r : records) {
    if (r.map != map || r.algorithm != algorithm || r.outcome.winner != Winner::VP) continue;
    (r.game <= games / 2 ? h.first : h.second) += 1;
  }
  return h;
}

}  // namespace wrts::pmea
