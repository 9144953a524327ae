// Runs the primary acceptance criteria and prints one PASS/FAIL line each.
// Usage: acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nav_harness.hpp"
#include "wrts/common/kv_config.hpp"
#include "wrts/common/rng.hpp"
#include "wrts/evolution/evolution.hpp"
#include "wrts/modeling/extended_answer_matrix.hpp"
#include "wrts/pmea/artifacts.hpp"
#include "wrts/pmea/experiment.hpp"
#include "wrts/pmea/persona.hpp"
#include "wrts/pmea/pmea.hpp"
#include "wrts/world/engine.hpp"
#include "wrts/world/replay.hpp"

using namespace wrts;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

fs::path data(const std::string& rel) { return fs::path(WRTS_DATA_DIR) / rel; }

MapPtr map_file(const std::string& rel) { return std::make_shared<const MapData>(load_map_file(data(rel))); }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "wrts_acceptance" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Runs the CLI; stdout goes to `out`. Returns the exit status.
int cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string("\"") + WRTS_CLI + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

int count_files(const fs::path& dir, const std::string& prefix) {
  int n = 0;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().filename().string().rfind(prefix, 0) == 0) ++n;
  }
  return n;
}

WorldConfig desk_world() { return load_world_config(data("configs/desk.cfg")); }

Verdict encoding() {
  std::set<int> seen;
  for (int h = 0; h < 3; ++h) {
    for (int a = 0; a < 2; ++a) {
      for (int u = 0; u < 2; ++u) {
        for (int v = 0; v < 2; ++v) {
          const UnitPerception p{static_cast<HealthLevel>(h), a == 1, u == 1, v == 1};
          const int index = state_index(p).value();
          if (index != ((h * 2 + a) * 2 + u) * 2 + v) return {false, "index formula broken"};
          if (!(decode_state(index) == p)) return {false, "decode does not invert encode"};
          seen.insert(index);
        }
      }
    }
  }
  for (int i = 0; i < kStateCount; ++i) {
    if (state_index(decode_state(i)).value() != i) return {false, "encode does not invert decode"};
  }
  const bool onto = seen.size() == 24 && *seen.begin() == 0 && *seen.rbegin() == 23;
  return {onto, "24 tuples map onto 0..23"};
}

Verdict determinism() {
  const std::vector<std::string> maps{"maps/arena_20x20.map",     "maps/reduced_a_25x25.map",
                                      "maps/reduced_b_25x25.map", "maps/reduced_c_25x25.map",
                                      "maps/battle_50x50.map",    "maps/battle_54x46.map",
                                      "maps/battle_50x28.map",    "maps/nav/bridge.map"};
  Rng rng(2024);
  int same = 0;
  for (int i = 0; i < 10; ++i) {
    const auto map = map_file(maps[rng.below(maps.size())]);
    const std::uint64_t seed = rng.below(1u << 30);
    AnswerMatrix hp;
    for (int g = 0; g < kStateCount; ++g) hp.set(g, kAllActions[rng.below(6)]);
    auto run = [&] {
      GameState s = spawn_game(map, WorldConfig{}, seed);
      const UnitPolicy vp_policy = matrix_policy(rbp_default());
      const UnitPolicy hp_policy = matrix_policy(hp);
      ReplayWriter w;
      while (!game_outcome(s)) w.write(step_turn(s, {}, vp_policy, &hp_policy));
      return w.hash();
    };
    if (run() == run()) ++same;
  }
  return {same == 10, std::to_string(same) + "/10 pairs replay identically"};
}

Verdict combat_fairness() {
  WorldConfig w;
  w.max_health = 10;
  const auto map = std::make_shared<const MapData>(
      load_map("f.........\n..........\n....ab....\n..........\n.........F\n"));
  const UnitPolicy hold = matrix_policy(AnswerMatrix::filled(Action::NoOperation));
  int rounds = 0;
  int vp_losses = 0;
  for (std::uint64_t seed = 1; seed <= 10000; ++seed) {
    GameState s = spawn_game(map, w, seed);
    const GroupOrder order{{1}, Action::NoOperation};
    const TurnReport r = step_turn(s, std::span(&order, 1), hold);
    for (const Event& e : r.events) {
      if (e.kind != EventKind::Combat) continue;
      ++rounds;
      if (s.units[static_cast<std::size_t>(e.unit_id)].army == Army::VP) ++vp_losses;
    }
  }
  const double share = static_cast<double>(vp_losses) / rounds;
  std::ostringstream d;
  d << rounds << " rounds, VP lost " << share * 100 << "%";
  return {rounds == 10000 && share >= 0.48 && share <= 0.52, d.str()};
}

Verdict fitness_formula() {
  auto f = [](int a, int b, long long c, int d) {
    evo::SimStats s;
    s.a_deaths_model_army = a;
    s.b_deaths_vp_army = b;
    s.c_movements = c;
    s.d_victory_degree = d;
    return evo::fitness(s);
  };
  const bool ok = f(10, 2, 4000, 1) == 20.0 && f(7, 7, 123, 1) == 0.0 && f(3, 3, 999, 2) == 0.0 &&
                  f(2, 10, 1000, 2) == -40.0;
  return {ok, "20, 0, 0, -40"};
}

Verdict ea_budget() {
  WorldConfig w;
  w.max_turns = 1500;
  const evo::EAConfig cfg = evo::load_ea_config(data("configs/ea_full.cfg"));
  const auto start = std::chrono::steady_clock::now();
  const auto r = evo::evolve(pmea::aggressor_matrix(), rbp_default(), cfg, map_file("maps/arena_20x20.map"), w);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  bool monotone = r.history.size() == 126;
  for (std::size_t i = 1; i < r.history.size(); ++i) monotone = monotone && r.history[i].best_fitness >= r.history[i - 1].best_fitness;
  std::ostringstream d;
  d << r.evaluations << " evaluations, " << r.history.size() << " generation records, " << secs << " s";
  return {r.evaluations == 300 && monotone && secs < 600, d.str()};
}

Verdict model_recovery() {
  // Contact-seeking genes in the calm states drive the game through most of the state space.
  Rng rng(77);
  AnswerMatrix p = AnswerMatrix::filled(Action::MoveForwardEnemy);
  for (int s = 0; s < kStateCount; ++s) {
    if (decode_state(s).under_attack) p.set(s, kAllActions[1 + rng.below(5)]);
  }
  const auto game = pmea::play_game_on(rbp_default(), pmea::Persona::fixed(p), 1,
                                       map_file("maps/arena_20x20.map"), desk_world(), 41);
  const AnswerMatrix extracted = extract_policy(game.recorded, rbp_default());
  int visited = 0;
  int matched = 0;
  for (int s = 0; s < kStateCount; ++s) {
    if (!game.recorded.observed(StateIndex(s))) continue;
    ++visited;
    if (extracted.at(s) == p.at(s)) ++matched;
  }
  return {visited >= 6 && matched == visited,
          std::to_string(matched) + "/" + std::to_string(visited) + " visited states recovered"};
}

Verdict pmea_end_to_end() {
  const std::string common = "pmea --rounds 5 --persona \"drifter(2)\" --map \"" + data("maps/arena_20x20.map").string() +
                             "\" --world-config \"" + data("configs/desk.cfg").string() + "\" --ea-config \"" +
                             data("configs/ea_full.cfg").string() + "\" --seed 7";
  const fs::path full = scratch("pmea_full");
  const fs::path resumed = scratch("pmea_resumed");
  const fs::path out = scratch("pmea_stdout");
  if (cli(common + " --output-dir \"" + full.string() + "\"", out / "full.json") != 0) return {false, "run failed"};
  const int models = count_files(full, "model_");
  const int genomes = count_files(full, "genome_");
  const int replays = count_files(full, "replay_");
  if (cli(common + " --output-dir \"" + resumed.string() + "\" --stop-after 2", out / "stop.json") != 0) {
    return {false, "interrupted run failed"};
  }
  const int genomes_at_stop = count_files(resumed, "genome_");
  if (cli(common + " --output-dir \"" + resumed.string() + "\"", out / "resume.json") != 0) {
    return {false, "resume failed"};
  }
  const json a = json::parse(slurp(out / "full.json"));
  const json b = json::parse(slurp(out / "resume.json"));
  const bool same = a["final_genome"] == b["final_genome"] &&
                    slurp(full / "genome_005.json") == slurp(resumed / "genome_005.json");
  std::ostringstream d;
  d << models << " models, " << genomes << " genomes, " << replays << " replays; resumed after "
    << b["resumed_after"] << " rounds, final genome " << (same ? "identical" : "differs");
  return {models == 5 && genomes == 6 && replays == 5 && genomes_at_stop == 3 && b["resumed_after"] == 2 && same,
          d.str()};
}

Verdict experiment_pipeline() {
  // Shape of the report on the full-size maps, at smoke scale.
  const fs::path out = scratch("experiment");
  std::string maps;
  for (const char* m : {"maps/battle_50x50.map", "maps/battle_54x46.map", "maps/battle_50x28.map"}) {
    maps += (maps.empty() ? "" : ",") + data(m).string();
  }
  const std::string args = "experiment --maps \"" + maps + "\" --games 2 --persona \"drifter(5)\" --world-config \"" +
                           data("configs/desk.cfg").string() + "\" --ea-config \"" +
                           data("configs/ea_reduced.cfg").string() + "\" --seed 3 --report-out \"" +
                           (out / "report.csv").string() + "\"";
  if (cli(args, out / "stdout.txt") != 0) return {false, "experiment command failed"};
  std::istringstream csv(slurp(out / "report.csv"));
  std::string header;
  std::getline(csv, header);
  int rows = 0;
  for (std::string line; std::getline(csv, line);) {
    if (std::count(line.begin(), line.end(), ',') == 8) ++rows;
  }
  if (header != "map,algorithm,VP_win,HP_win,draws,HP_death,VP_death,mov,time" || rows != 6) {
    return {false, "unexpected report shape"};
  }

  // Adaptation on the reduced 25x25 variant.
  pmea::ExperimentConfig cfg;
  for (const char* m : {"reduced_a_25x25", "reduced_b_25x25", "reduced_c_25x25"}) {
    cfg.maps.push_back({m, map_file(std::string("maps/") + m + ".map")});
  }
  cfg.algorithms = {pmea::Algorithm::PMEA};
  cfg.games = 20;
  cfg.persona = "drifter(5)";
  cfg.world = desk_world();
  cfg.ea = evo::load_ea_config(data("configs/ea_reduced.cfg"));
  int adapted = 0;
  int first_total = 0;
  int second_total = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    cfg.seed = seed;
    const auto report = pmea::run_experiment(cfg);
    int first = 0;
    int second = 0;
    for (const auto& m : cfg.maps) {
      const auto h = pmea::half_wins(report.records, m.name, pmea::Algorithm::PMEA);
      first += h.first;
      second += h.second;
    }
    if (second >= first) ++adapted;
    first_total += first;
    second_total += second;
  }
  return {adapted >= 14, "report has 6 rows; second-half wins >= first half in " + std::to_string(adapted) +
                             "/20 seeds (VP wins " + std::to_string(first_total) + " in rounds 1-10, " +
                             std::to_string(second_total) + " in rounds 11-20)"};
}

Verdict navigation() {
  int cases = 0;
  int reached = 0;
  for (const char* name : {"maps/nav/concave_u.map", "maps/nav/convex_block.map", "maps/nav/bridge.map",
                           "maps/nav/two_bridges.map", "maps/nav/capture_5x5.map", "maps/nav/capture_3x3.map"}) {
    const auto map = map_file(name);
    const int bound = 10 * (map->terrain.width() + map->terrain.height());
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto r = harness::run_reach(map, seed, bound);
      if (!r.bfs) continue;
      ++cases;
      if (r.turns && *r.turns <= bound && r.all_steps_legal) ++reached;
    }
  }
  int dominant = 0;
  const auto bridges = map_file("maps/nav/two_bridges.map");
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = harness::run_two_bridges(bridges, seed, 10, 200, {{3, 4}}, {{14, 4}});
    if (r.short_bridge > r.long_bridge && r.min_value >= 0.0 && r.max_value <= 100.0) ++dominant;
  }
  return {cases > 0 && reached == cases && dominant == 5,
          std::to_string(reached) + "/" + std::to_string(cases) + " reachable runs arrive; shorter bridge wins " +
              std::to_string(dominant) + "/5"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"state encoding bijection", encoding},
      {"engine determinism", determinism},
      {"combat fairness", combat_fairness},
      {"fitness formula", fitness_formula},
      {"EA budget and elitism", ea_budget},
      {"model recovery", model_recovery},
      {"PMEA end to end with resume", pmea_end_to_end},
      {"experiment pipeline and adaptation", experiment_pipeline},
      {"navigation", navigation},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(number)) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failed;
    std::printf("%s %d %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", number, criteria[i].first, v.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
