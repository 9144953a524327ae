#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wrts/common/artifact_error.hpp"
#include "wrts/common/kv_config.hpp"
#include "wrts/evolution/evolution.hpp"
#include "wrts/pmea/artifacts.hpp"
#include "wrts/pmea/experiment.hpp"
#include "wrts/pmea/pmea.hpp"
#include "wrts/world/engine.hpp"
#include "wrts/world/replay.hpp"

#ifdef WRTS_WITH_SESSION
#include "wrts/session/live_opponent.hpp"
#include "wrts/session/server.hpp"
#endif

namespace {

using namespace wrts;
namespace fs = std::filesystem;

constexpr int kUsageError = 1;
constexpr int kArtifactError = 2;

MapPtr read_map(const fs::path& path) {
  try {
    return std::make_shared<const MapData>(load_map_file(path));
  } catch (const MapError& e) {
    throw ArtifactError(ArtifactError::Kind::Malformed, path.string() + ": " + e.what());
  }
}

WorldConfig read_world(const std::string& path) { return path.empty() ? WorldConfig{} : load_world_config(path); }

evo::EAConfig read_ea(const std::string& path) { return path.empty() ? evo::EAConfig{} : evo::load_ea_config(path); }

/// A genome file, or an extended answer matrix from which the policy is extracted.
AnswerMatrix read_policy(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError(ArtifactError::Kind::Missing, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto doc = nlohmann::json::parse(buffer.str(), nullptr, false);
  if (doc.is_object() && doc.value("format", "") == "extended-answer-matrix-v1") {
    return extract_policy(pmea::load_model(path), rbp_default());
  }
  return pmea::load_genome(path);
}

pmea::ModelMode parse_mode(const std::string& s) {
  if (s == "per-game") return pmea::ModelMode::PerGame;
  if (s == "cumulative") return pmea::ModelMode::Cumulative;
  throw ConfigError("model mode must be per-game or cumulative");
}

std::string map_name(const fs::path& p) { return p.stem().string(); }

void print_json(const nlohmann::json& j) { std::cout << j.dump() << std::endl; }

struct SimulateArgs {
  std::string map, vp_genome, hp_genome, persona = "rbp-mirror", replay_out, world;
  std::uint64_t seed = 1;
  int game = 1;
};

int run_simulate(const SimulateArgs& a) {
  const MapPtr map = read_map(a.map);
  const WorldConfig world = read_world(a.world);
  const AnswerMatrix vp = a.vp_genome.empty() ? rbp_default() : read_policy(a.vp_genome);
  nlohmann::json out;
  if (!a.hp_genome.empty()) {
    const AnswerMatrix hp = read_policy(a.hp_genome);
    GameState state = spawn_game(map, world, a.seed);
    const UnitPolicy vp_policy = matrix_policy(vp);
    const UnitPolicy hp_policy = matrix_policy(hp);
    ReplayWriter writer = a.replay_out.empty() ? ReplayWriter() : ReplayWriter(a.replay_out);
    std::optional<Outcome> outcome;
    while (!(outcome = game_outcome(state))) writer.write(step_turn(state, {}, vp_policy, &hp_policy));
    out = outcome_to_json(*outcome);
    out["replay_hash"] = writer.hash();
    out["fitness"] = evo::fitness(evo::stats_from_outcome(*outcome, state, evo::MovementScope::BothArmies));
  } else {
    const pmea::Persona persona = pmea::Persona::parse(a.persona);
    const pmea::OnlineGame g = pmea::play_game_on(vp, persona, a.game, map, world, a.seed, a.replay_out);
    out = outcome_to_json(g.outcome);
    out["replay_hash"] = g.replay_hash;
    out["observations"] = g.unit_orders;
    out["seconds"] = g.seconds;
  }
  print_json(out);
  return 0;
}

struct EvolveArgs {
  std::string model, seed_genome, ea_config, map, world, out, log;
  std::uint64_t seed = 1;
};

int run_evolve(const EvolveArgs& a) {
  const MapPtr map = read_map(a.map);
  const WorldConfig world = read_world(a.world);
  evo::EAConfig ea = read_ea(a.ea_config);
  ea.seed = a.seed;
  const AnswerMatrix model = read_policy(a.model);
  const AnswerMatrix seed_vp = a.seed_genome.empty() ? rbp_default() : read_policy(a.seed_genome);
  std::ofstream log;
  if (!a.log.empty()) log.open(a.log, std::ios::binary | std::ios::trunc);
  std::stop_source stop;
  evo::EvolveOptions options;
  options.on_generation = [&](const evo::GenerationRecord& r) {
    if (log.is_open()) log << evo::generation_to_json(r).dump() << '\n';
  };
  const auto result = evo::evolve(model, seed_vp, ea, map, world, options);
  if (!a.out.empty()) pmea::save_genome(a.out, result.best);
  print_json({{"best_fitness", result.best_fitness},
              {"evaluations", result.evaluations},
              {"best_genome", result.best.to_ints()}});
  return 0;
}

struct PmeaArgs {
  std::string persona, output_dir, map, world, ea_config, mode = "per-game", host = "127.0.0.1";
  int rounds = 20;
  int stop_after = 0;
  int port = 8080;
  bool live = false;
  std::uint64_t seed = 1;
};

int run_pmea_cmd(const PmeaArgs& a) {
  pmea::PmeaConfig cfg;
  cfg.rounds = a.rounds;
  cfg.map = read_map(a.map);
  cfg.world = read_world(a.world);
  cfg.ea = read_ea(a.ea_config);
  cfg.model_mode = parse_mode(a.mode);
  cfg.seed = a.seed;
  cfg.output_dir = a.output_dir;
  pmea::PmeaOptions options;
  options.stop_after_round = a.stop_after;
  options.on_round = [](const pmea::RoundRecord& r) {
    std::cerr << "round " << r.round << ": " << winner_name(r.outcome.winner) << " after " << r.outcome.turns
              << " turns, best fitness " << r.best_fitness << "\n";
  };

  std::unique_ptr<pmea::Opponent> opponent;
  if (a.live) {
#ifdef WRTS_WITH_SESSION
    opponent = std::make_unique<session::LiveOpponent>(a.host, a.port);
#else
    throw ConfigError("this build has no session service");
#endif
  } else {
    if (a.persona.empty()) throw ConfigError("pmea needs --persona or --live");
    opponent = std::make_unique<pmea::PersonaOpponent>(pmea::Persona::parse(a.persona));
  }
  const pmea::PmeaResult result = pmea::run_pmea(cfg, *opponent, options);
  print_json({{"completed", result.completed},
              {"resumed_after", result.resumed_after},
              {"rounds", result.rounds.size()},
              {"final_genome", result.final_vp.to_ints()}});
  return 0;
}

struct ExperimentArgs {
  std::vector<std::string> maps;
  std::vector<std::string> algorithms{"RBP", "PMEA"};
  std::string persona = "drifter(5)", report_out, output_dir, world, ea_config, mode = "per-game";
  int games = 20;
  int threads = 1;
  std::uint64_t seed = 1;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  pmea::ExperimentConfig cfg;
  for (const auto& m : a.maps) cfg.maps.push_back({map_name(m), read_map(m)});
  cfg.algorithms.clear();
  for (const auto& name : a.algorithms) cfg.algorithms.push_back(pmea::algorithm_from_name(name));
  cfg.games = a.games;
  cfg.persona = a.persona;
  cfg.seed = a.seed;
  cfg.world = read_world(a.world);
  cfg.ea = read_ea(a.ea_config);
  cfg.model_mode = parse_mode(a.mode);
  cfg.output_dir = a.output_dir;
  cfg.threads = a.threads;
  const auto report = pmea::run_experiment(cfg, [](const pmea::GameRecord& r) {
    std::cerr << r.map << " " << pmea::algorithm_name(r.algorithm) << " game " << r.game << ": "
              << winner_name(r.outcome.winner) << "\n";
  });
  const std::string csv = pmea::report_csv(report);
  if (a.report_out.empty()) {
    std::cout << csv;
  } else {
    pmea::write_text_atomic(a.report_out, csv);
  }
  return 0;
}

struct StatsArgs {
  std::string records, report_out;
};

int run_stats(const StatsArgs& a) {
  const auto report = pmea::make_report(pmea::load_records(a.records));
  const std::string csv = pmea::report_csv(report);
  if (a.report_out.empty()) {
    std::cout << csv;
  } else {
    pmea::write_text_atomic(a.report_out, csv);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"War RTS sandbox: simulation, evolution and the play-model-evolve loop"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Play one headless game");
  simulate->add_option("--map", sim.map, "Map file")->required();
  simulate->add_option("--vp-genome", sim.vp_genome, "VP genome (default: rule-based prototype)");
  auto* hp_genome = simulate->add_option("--hp-genome", sim.hp_genome, "HP genome or player model");
  simulate->add_option("--persona", sim.persona, "HP persona")->excludes(hp_genome);
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--game", sim.game, "Game number, for scheduled personas");
  simulate->add_option("--replay-out", sim.replay_out);
  simulate->add_option("--world-config", sim.world);

  EvolveArgs ev;
  auto* evolve = app.add_subcommand("evolve", "Evolve a VP against a player model");
  evolve->add_option("--model", ev.model, "Player model or genome")->required();
  evolve->add_option("--seed-genome", ev.seed_genome, "Initial VP (default: rule-based prototype)");
  evolve->add_option("--ea-config", ev.ea_config);
  evolve->add_option("--map", ev.map)->required();
  evolve->add_option("--world-config", ev.world);
  evolve->add_option("--seed", ev.seed);
  evolve->add_option("--out", ev.out, "Where to write the best genome");
  evolve->add_option("--log", ev.log, "Per-generation JSONL log");

  PmeaArgs pm;
  auto* pmea_cmd = app.add_subcommand("pmea", "Run the play-model-evolve loop");
  pmea_cmd->add_option("--rounds", pm.rounds);
  auto* persona = pmea_cmd->add_option("--persona", pm.persona);
  pmea_cmd->add_flag("--live", pm.live, "Wait for a human through the session service")->excludes(persona);
  pmea_cmd->add_option("--output-dir", pm.output_dir)->required();
  pmea_cmd->add_option("--map", pm.map)->required();
  pmea_cmd->add_option("--world-config", pm.world);
  pmea_cmd->add_option("--ea-config", pm.ea_config);
  pmea_cmd->add_option("--model-mode", pm.mode, "per-game or cumulative");
  pmea_cmd->add_option("--seed", pm.seed);
  pmea_cmd->add_option("--stop-after", pm.stop_after, "Stop after this round (resume later)");
  pmea_cmd->add_option("--host", pm.host, "Live: session service address");
  pmea_cmd->add_option("--port", pm.port, "Live: session service port");

  ExperimentArgs ex;
  auto* experiment = app.add_subcommand("experiment", "RBP versus PMEA over a set of maps");
  experiment->add_option("--maps", ex.maps)->required()->delimiter(',');
  experiment->add_option("--algorithms", ex.algorithms)->delimiter(',');
  experiment->add_option("--games", ex.games);
  experiment->add_option("--persona", ex.persona);
  experiment->add_option("--report-out", ex.report_out, "CSV report (default: stdout)");
  experiment->add_option("--output-dir", ex.output_dir, "Raw records and PMEA artifacts");
  experiment->add_option("--world-config", ex.world);
  experiment->add_option("--ea-config", ex.ea_config);
  experiment->add_option("--model-mode", ex.mode);
  experiment->add_option("--seed", ex.seed);
  experiment->add_option("--threads", ex.threads);

  StatsArgs st;
  auto* stats = app.add_subcommand("stats", "Recompute the report from raw records");
  stats->add_option("--records", st.records)->required();
  stats->add_option("--report-out", st.report_out);

#ifdef WRTS_WITH_SESSION
  session::ServeOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "Start the session service");
  serve->add_option("--host", serve_opts.host);
  serve->add_option("--port", serve_opts.port);
  serve->add_option("--tick-rate", serve_opts.tick_rate, "Turns per second while running");
  serve->add_option("--record-dir", serve_opts.record_dir, "Where finished sessions persist their recorders");
#endif

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*simulate) return run_simulate(sim);
    if (*evolve) return run_evolve(ev);
    if (*pmea_cmd) return run_pmea_cmd(pm);
    if (*experiment) return run_experiment_cmd(ex);
    if (*stats) return run_stats(st);
#ifdef WRTS_WITH_SESSION
    if (*serve) return session::serve(serve_opts);
#endif
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ArtifactError& e) {
    std::cerr << "artifact error: " << e.what() << "\n";
    return kArtifactError;
  } catch (const MatrixError& e) {
    std::cerr << "artifact error: " << e.what() << "\n";
    return kArtifactError;
  }
  return kUsageError;
}
