#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support.hpp"
#include "wrts/common/kv_config.hpp"
#include "wrts/pmea/artifacts.hpp"
#include "wrts/pmea/experiment.hpp"
#include "wrts/pmea/pmea.hpp"
#include "wrts/world/replay.hpp"

using namespace wrts;
using namespace wrts::pmea;
using fixtures::map_fixture;
using fixtures::scratch_dir;

namespace {

WorldConfig desk_world() {
  WorldConfig w;
  w.max_health = 10;
  w.max_turns = 1500;
  return w;
}

evo::EAConfig tiny_ea() {
  evo::EAConfig ea;
  ea.popsize = 6;
  ea.max_generations = 3;
  ea.p_m = 0.05;
  return ea;
}

PmeaConfig tiny_pmea(int rounds) {
  PmeaConfig cfg;
  cfg.rounds = rounds;
  cfg.map = map_fixture("maps/arena_20x20.map");
  cfg.world = desk_world();
  cfg.ea = tiny_ea();
  cfg.seed = 11;
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int count_files(const std::filesystem::path& dir, std::string_view prefix) {
  int n = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.path().filename().string().starts_with(prefix)) ++n;
  }
  return n;
}

AnswerMatrix random_matrix(Rng& rng) {
  AnswerMatrix m;
  for (int i = 0; i < kStateCount; ++i) m.set(i, kAllActions[rng.below(kActionCount)]);
  return m;
}

std::vector<UnitPerception> every_perception() {
  std::vector<UnitPerception> out;
  for (int i = 0; i < kStateCount; ++i) out.push_back(decode_state(i));
  return out;
}

}  // namespace

TEST(Persona, BuiltinPolicies) {
  Rng rng(1);
  const Persona aggressor = Persona::parse("aggressor");
  const Persona turtle = Persona::parse("turtle");
  for (const auto& p : every_perception()) {
    EXPECT_EQ(aggressor.decide(p, 1, rng),
              p.health == HealthLevel::Low ? Action::GroupRunAway : Action::MoveForwardEnemy);
    EXPECT_EQ(turtle.decide(p, 1, rng),
              p.objective_visible ? Action::MoveForwardObjective : Action::ProtectFlag);
    EXPECT_EQ(Persona::parse("rbp-mirror").decide(p, 3, rng), rbp_default().at(state_index(p).value()));
  }
}

TEST(Persona, ZeroNoiseIsTheMirror) {
  const Persona mirror = Persona::parse("rbp-mirror");
  const Persona quiet = Persona::parse("random(0)");
  Rng a(5);
  Rng b(5);
  for (int round = 0; round < 10; ++round) {
    for (const auto& p : every_perception()) EXPECT_EQ(mirror.decide(p, 1, a), quiet.decide(p, 1, b));
  }
  EXPECT_EQ(a, b);
}

TEST(Persona, NoiseRate) {
  const Persona noisy = Persona::parse("random(0.3)");
  Rng rng(9);
  const UnitPerception p = decode_state(0);
  int off = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) off += noisy.decide(p, 1, rng) != rbp_default().at(0);
  // A uniform replacement keeps the mirror's action one time in six.
  EXPECT_NEAR(off / double(n), 0.3 * 5.0 / 6.0, 0.015);
}

TEST(Persona, DrifterSchedule) {
  const Persona d = Persona::parse("drifter(5)");
  for (int g = 1; g <= 5; ++g) EXPECT_EQ(d.matrix_for_game(g), aggressor_matrix()) << g;
  for (int g = 6; g <= 10; ++g) EXPECT_EQ(d.matrix_for_game(g), turtle_matrix()) << g;
  EXPECT_EQ(d.matrix_for_game(11), aggressor_matrix());
  const Persona two = Persona::parse("drifter(2)");
  EXPECT_EQ(two.matrix_for_game(3), turtle_matrix());
}

TEST(Persona, ParseErrors) {
  for (const char* bad : {"", "nobody", "random(1.5)", "random(x)", "drifter(0)", "drifter(", "matrix(1,2)",
                          "matrix(1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,1,9)"}) {
    EXPECT_THROW(Persona::parse(bad), ConfigError) << bad;
  }
  std::string name = "matrix(";
  for (int i = 0; i < kStateCount; ++i) name += std::to_string(1 + i % 6) + (i + 1 < kStateCount ? "," : ")");
  const Persona m = Persona::parse(name);
  EXPECT_EQ(m.matrix_for_game(1).at(7), Action::GroupRunAway);
  EXPECT_EQ(m.matrix_for_game(1).at(6), Action::MoveForwardEnemy);
}

TEST(PlayGameOn, RecordedModelMatchesTheReplayLog) {
  const auto dir = scratch_dir("pmea_replay");
  const auto map = map_fixture("maps/arena_20x20.map");
  const auto game = play_game_on(rbp_default(), Persona::parse("random(0.2)"), 1, map, desk_world(), 21,
                                 dir / "game.jsonl");
  ExtendedAnswerMatrix oracle;
  for (const auto& turn : load_replay(dir / "game.jsonl")) {
    for (const auto& e : turn.events) {
      if (e["kind"] != "order") continue;
      oracle.record(StateIndex(e["state"].get<int>()), *action_from_int(e["action"].get<int>()));
    }
  }
  EXPECT_GT(oracle.total_observations(), 0u);
  EXPECT_EQ(game.recorded, oracle);
  EXPECT_EQ(game.unit_orders, static_cast<long long>(oracle.total_observations()));
}

TEST(PlayGameOn, Deterministic) {
  const auto map = map_fixture("maps/arena_20x20.map");
  const Persona p = Persona::parse("random(0.2)");
  const auto a = play_game_on(rbp_default(), p, 1, map, desk_world(), 4);
  const auto b = play_game_on(rbp_default(), p, 1, map, desk_world(), 4);
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(a.recorded, b.recorded);
  EXPECT_EQ(a.replay_hash, b.replay_hash);
}

TEST(PlayGameOn, ModelRecoveryOfAFixedPersona) {
  Rng rng(12);
  const auto map = map_fixture("maps/arena_20x20.map");
  for (int trial = 0; trial < 5; ++trial) {
    const AnswerMatrix p = random_matrix(rng);
    const auto game = play_game_on(rbp_default(), Persona::fixed(p), 1, map, desk_world(), 100 + trial);
    const AnswerMatrix extracted = extract_policy(game.recorded, rbp_default());
    int visited = 0;
    for (int s = 0; s < kStateCount; ++s) {
      if (!game.recorded.observed(StateIndex(s))) continue;
      ++visited;
      EXPECT_EQ(extracted.at(s), p.at(s)) << "state " << s;
      EXPECT_EQ(game.recorded.count(StateIndex(s), p.at(s)), game.recorded.row_total(StateIndex(s)));
    }
    EXPECT_GT(visited, 0);
  }
}

TEST(Artifacts, GenomeAndModelRoundTripByteExact) {
  const auto dir = scratch_dir("artifacts");
  Rng rng(3);
  const AnswerMatrix g = random_matrix(rng);
  save_genome(dir / "g.json", g);
  EXPECT_EQ(load_genome(dir / "g.json"), g);
  save_genome(dir / "g2.json", load_genome(dir / "g.json"));
  EXPECT_EQ(slurp(dir / "g.json"), slurp(dir / "g2.json"));

  ExtendedAnswerMatrix m;
  for (int i = 0; i < 50; ++i) m.record(StateIndex(static_cast<int>(rng.below(24))), kAllActions[rng.below(6)]);
  save_model(dir / "m.json", m);
  EXPECT_EQ(load_model(dir / "m.json"), m);
  save_model(dir / "m2.json", load_model(dir / "m.json"));
  EXPECT_EQ(slurp(dir / "m.json"), slurp(dir / "m2.json"));
}

TEST(Artifacts, Errors) {
  const auto dir = scratch_dir("artifact_errors");
  auto kind = [](auto fn) {
    try {
      fn();
    } catch (const ArtifactError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error";
    return ArtifactError::Kind::Missing;
  };
  EXPECT_EQ(kind([&] { load_genome(dir / "none.json"); }), ArtifactError::Kind::Missing);
  std::ofstream(dir / "broken.json") << "{\"format\": ";
  EXPECT_EQ(kind([&] { load_genome(dir / "broken.json"); }), ArtifactError::Kind::Malformed);
  save_model(dir / "model.json", ExtendedAnswerMatrix{});
  EXPECT_EQ(kind([&] { load_genome(dir / "model.json"); }), ArtifactError::Kind::VersionMismatch);
  auto doc = nlohmann::json::parse(slurp(dir / "model.json"));
  doc["counts"][0] = {1, 2};
  write_json_artifact(dir / "short.json", doc);
  EXPECT_EQ(kind([&] { load_model(dir / "short.json"); }), ArtifactError::Kind::Malformed);
}

TEST(RunPmea, PersistsEveryRound) {
  auto cfg = tiny_pmea(3);
  cfg.output_dir = scratch_dir("pmea_full");
  PersonaOpponent opp(Persona::parse("rbp-mirror"));
  const auto r = run_pmea(cfg, opp);
  EXPECT_TRUE(r.completed);
  ASSERT_EQ(r.rounds.size(), 3u);
  EXPECT_EQ(count_files(cfg.output_dir, "replay_"), 3);
  EXPECT_EQ(count_files(cfg.output_dir, "model_"), 3);
  EXPECT_EQ(count_files(cfg.output_dir, "genome_"), 4);
  EXPECT_EQ(count_files(cfg.output_dir, "round_"), 3);
  EXPECT_EQ(load_genome(cfg.output_dir / "genome_000.json"), rbp_default());
  EXPECT_EQ(load_genome(cfg.output_dir / "genome_003.json"), r.final_vp);
  for (const auto& rec : r.rounds) {
    EXPECT_EQ(rec.evaluations, 6 + 2 * 3);
    EXPECT_EQ(rec.game_seed, round_game_seed(cfg.seed, rec.round));
    EXPECT_EQ(round_from_json(round_to_json(rec)), rec);
  }
}

TEST(RunPmea, DeterministicAndResumable) {
  auto cfg = tiny_pmea(4);
  PersonaOpponent opp(Persona::parse("drifter(2)"));
  const auto straight = run_pmea(cfg, opp);
  const auto again = run_pmea(cfg, opp);
  EXPECT_EQ(straight.final_vp, again.final_vp);

  cfg.output_dir = scratch_dir("pmea_resume");
  PmeaOptions stop;
  stop.stop_after_round = 2;
  const auto half = run_pmea(cfg, opp, stop);
  EXPECT_FALSE(half.completed);
  EXPECT_EQ(half.rounds.size(), 2u);
  // Leftovers of an interrupted third round are redone.
  std::ofstream(round_file(cfg.output_dir, "replay", 3, ".jsonl")) << "{\"turn\":0";
  const auto resumed = run_pmea(cfg, opp);
  EXPECT_TRUE(resumed.completed);
  EXPECT_EQ(resumed.resumed_after, 2);
  EXPECT_EQ(resumed.final_vp, straight.final_vp);
  ASSERT_EQ(resumed.rounds.size(), straight.rounds.size());
  for (std::size_t i = 0; i < straight.rounds.size(); ++i) {
    EXPECT_EQ(resumed.rounds[i].outcome, straight.rounds[i].outcome);
    EXPECT_EQ(resumed.rounds[i].best_fitness, straight.rounds[i].best_fitness);
  }
}

TEST(RunPmea, CumulativeModeResumes) {
  auto cfg = tiny_pmea(3);
  cfg.model_mode = ModelMode::Cumulative;
  PersonaOpponent opp(Persona::parse("random(0.3)"));
  const auto straight = run_pmea(cfg, opp);
  cfg.output_dir = scratch_dir("pmea_cumulative");
  PmeaOptions stop;
  stop.stop_after_round = 1;
  run_pmea(cfg, opp, stop);
  EXPECT_EQ(run_pmea(cfg, opp).final_vp, straight.final_vp);
}

TEST(RunPmea, RefusesAForeignOutputDirectory) {
  auto cfg = tiny_pmea(2);
  cfg.output_dir = scratch_dir("pmea_foreign");
  PersonaOpponent opp(Persona::parse("rbp-mirror"));
  PmeaOptions stop;
  stop.stop_after_round = 1;
  run_pmea(cfg, opp, stop);
  cfg.seed += 1;
  try {
    run_pmea(cfg, opp);
    FAIL();
  } catch (const ArtifactError& e) {
    EXPECT_EQ(e.kind(), ArtifactError::Kind::VersionMismatch);
  }
}

TEST(RunPmea, RejectsZeroRounds) {
  auto cfg = tiny_pmea(0);
  PersonaOpponent opp(Persona::parse("rbp-mirror"));
  EXPECT_THROW(run_pmea(cfg, opp), ConfigError);
}

TEST(Experiment, ReportAccountingAndRecompute) {
  ExperimentConfig cfg;
  cfg.maps = {{"arena", map_fixture("maps/arena_20x20.map")}, {"reduced_b", map_fixture("maps/reduced_b_25x25.map")}};
  cfg.games = 3;
  cfg.world = desk_world();
  cfg.ea = tiny_ea();
  cfg.seed = 8;
  cfg.output_dir = scratch_dir("experiment");
  const auto report = run_experiment(cfg);
  ASSERT_EQ(report.rows.size(), 4u);
  EXPECT_EQ(report.records.size(), 12u);
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.games, 3);
    EXPECT_EQ(row.vp_wins + row.hp_wins + row.draws, row.games);
  }
  const auto raw = load_records(cfg.output_dir / "records.jsonl");
  EXPECT_EQ(raw, report.records);
  const auto again = make_report(raw);
  ASSERT_EQ(again.rows.size(), report.rows.size());
  for (std::size_t i = 0; i < again.rows.size(); ++i) {
    const auto& a = again.rows[i];
    const auto& b = report.rows[i];
    EXPECT_EQ(a.map, b.map);
    EXPECT_EQ(a.vp_wins, b.vp_wins);
    EXPECT_NEAR(a.hp_deaths, b.hp_deaths, 1e-9);
    EXPECT_NEAR(a.vp_deaths, b.vp_deaths, 1e-9);
    EXPECT_NEAR(a.movements, b.movements, 1e-9);
    EXPECT_NEAR(a.minutes, b.minutes, 1e-9);
  }
  const std::string csv = slurp(cfg.output_dir / "report.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "map,algorithm,VP_win,HP_win,draws,HP_death,VP_death,mov,time");
  EXPECT_EQ(csv, report_csv(report));
  const auto loaded = load_report(cfg.output_dir / "report.json");
  EXPECT_EQ(report_csv(loaded), csv);
  EXPECT_TRUE(std::filesystem::exists(cfg.output_dir / "arena_PMEA" / "genome_003.json"));
}

TEST(Experiment, SingleGameAndSeedInvariantRbp) {
  ExperimentConfig cfg;
  cfg.maps = {{"arena", map_fixture("maps/arena_20x20.map")}};
  cfg.algorithms = {Algorithm::RBP};
  cfg.games = 1;
  cfg.world = desk_world();
  cfg.ea = tiny_ea();
  const auto one = run_experiment(cfg);
  ASSERT_EQ(one.rows.size(), 1u);
  const Outcome& o = one.records.at(0).outcome;
  EXPECT_EQ(one.rows[0].hp_deaths, o.deaths_hp);
  EXPECT_EQ(one.rows[0].vp_deaths, o.deaths_vp);
  EXPECT_EQ(one.rows[0].movements, static_cast<double>(o.movements));
  EXPECT_EQ(one.rows[0].vp_wins, o.winner == Winner::VP ? 1 : 0);

  cfg.games = 4;
  const auto a = run_experiment(cfg);
  cfg.ea.seed = 12345;
  cfg.ea.popsize = 9;
  const auto b = run_experiment(cfg);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) EXPECT_EQ(a.records[i].outcome, b.records[i].outcome);
}

TEST(Experiment, ThreadedRunMatchesSequential) {
  ExperimentConfig cfg;
  cfg.maps = {{"arena", map_fixture("maps/arena_20x20.map")}};
  cfg.games = 2;
  cfg.world = desk_world();
  cfg.ea = tiny_ea();
  const auto a = run_experiment(cfg);
  cfg.threads = 3;
  const auto b = run_experiment(cfg);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].outcome, b.records[i].outcome);
    EXPECT_EQ(a.records[i].algorithm, b.records[i].algorithm);
  }
}

TEST(Experiment, RecordsFileErrorsCarryLineNumbers) {
  const auto dir = scratch_dir("records");
  GameRecord r;
  r.map = "m";
  r.game = 1;
  save_records(dir / "r.jsonl", {r, r});
  EXPECT_EQ(load_records(dir / "r.jsonl").size(), 2u);
  std::string text = slurp(dir / "r.jsonl");
  std::ofstream(dir / "bad.jsonl") << text.substr(0, text.size() - 10);
  try {
    load_records(dir / "bad.jsonl");
    FAIL();
  } catch (const ArtifactError& e) {
    EXPECT_EQ(e.kind(), ArtifactError::Kind::Malformed);
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(Experiment, HalfWins) {
  std::vector<GameRecord> recs;
  for (int g = 1; g <= 6; ++g) {
    GameRecord r;
    r.map = "m";
    r.algorithm = Algorithm::PMEA;
    r.game = g;
    r.outcome.winner = (g == 2 || g >= 5) ? Winner::VP : Winner::HP;
    recs.push_back(r);
  }
  const auto h = half_wins(recs, "m", Algorithm::PMEA);
  EXPECT_EQ(h.first, 1);
  EXPECT_EQ(h.second, 2);
}
