#include <gtest/gtest.h>

#include <atomic>
#include <map>
#include <mutex>
#include <set>

#include "support.hpp"
#include "wrts/common/kv_config.hpp"
#include "wrts/evolution/evolution.hpp"

using namespace wrts;
using namespace wrts::evo;
using fixtures::map_fixture;

namespace {

SimStats make_stats(int a, int b, long long c, int d) {
  SimStats s;
  s.a_deaths_model_army = a;
  s.b_deaths_vp_army = b;
  s.c_movements = c;
  s.d_victory_degree = d;
  return s;
}

WorldConfig desk_world() {
  WorldConfig w;
  w.max_health = 10;
  w.max_turns = 1500;
  return w;
}

// Cheap deterministic score: how many genes match a hidden target.
double match_score(const AnswerMatrix& g, const AnswerMatrix& target) {
  double n = 0;
  for (int i = 0; i < kStateCount; ++i) n += g.at(i) == target.at(i);
  return n;
}

}  // namespace

TEST(Fitness, Formula) {
  EXPECT_EQ(fitness(make_stats(10, 2, 4000, 1)), 20.0);
  EXPECT_EQ(fitness(make_stats(2, 10, 1000, 2)), -40.0);
  for (int x : {0, 3, 17}) {
    for (long long c : {1LL, 9LL, 12345LL}) {
      for (int d : {1, 2}) EXPECT_EQ(fitness(make_stats(x, x, c, d)), 0.0);
    }
  }
}

TEST(Fitness, StatsFromOutcome) {
  Outcome o;
  o.winner = Winner::VP;
  o.deaths_hp = 4;
  o.deaths_vp = 1;
  o.movements = 0;
  GameState dummy;
  auto s = stats_from_outcome(o, dummy, MovementScope::BothArmies);
  EXPECT_EQ(s.c_movements, 1);
  EXPECT_EQ(s.d_victory_degree, 1);
  EXPECT_EQ(fitness(s), 30000.0);
  o.winner = Winner::Draw;
  EXPECT_EQ(stats_from_outcome(o, dummy, MovementScope::BothArmies).d_victory_degree, 2);
  o.movements = 500;
  dummy.movements = {120, 380};
  EXPECT_EQ(stats_from_outcome(o, dummy, MovementScope::BothArmies).c_movements, 500);
  EXPECT_EQ(stats_from_outcome(o, dummy, MovementScope::VpOnly).c_movements, 120);
}

TEST(PlayGameOff, DeterministicPerSeed) {
  const auto map = map_fixture("maps/arena_20x20.map");
  const auto a = play_game_off(rbp_default(), rbp_default(), map, desk_world(), 17);
  const auto b = play_game_off(rbp_default(), rbp_default(), map, desk_world(), 17);
  EXPECT_EQ(a.outcome, b.outcome);
  EXPECT_EQ(fitness(a), fitness(b));
}

TEST(PlayGameOff, SelfPlayIsBalanced) {
  const auto map = map_fixture("maps/arena_20x20.map");
  int vp = 0;
  int hp = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = play_game_off(rbp_default(), rbp_default(), map, desk_world(), seed);
    vp += s.outcome.winner == Winner::VP;
    hp += s.outcome.winner == Winner::HP;
  }
  ASSERT_GT(vp + hp, 0);
  const double share = static_cast<double>(vp) / (vp + hp);
  EXPECT_NEAR(share, 0.5, 0.15) << vp << " VP wins, " << hp << " HP wins";
}

TEST(PlayGameOff, PassiveCandidateNeverWins) {
  const auto map = map_fixture("maps/arena_20x20.map");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s =
        play_game_off(rbp_default(), AnswerMatrix::filled(Action::NoOperation), map, desk_world(), seed);
    EXPECT_EQ(s.d_victory_degree, 2) << "seed " << seed;
  }
}

TEST(Roulette, UniformWhenAllEqual) {
  Rng rng(1);
  const std::vector<double> f{0, 0, 0};
  std::array<int, 3> hits{};
  for (int i = 0; i < 10000; ++i) ++hits[roulette_index(f, rng)];
  for (int h : hits) EXPECT_NEAR(h / 10000.0, 1.0 / 3.0, 0.02);
}

TEST(Roulette, ShiftedWeights) {
  Rng rng(2);
  const std::vector<double> f{-40, 20};
  // eps = 0.001 * 61; weights [eps, 60 + eps]
  const double eps = 0.001 * 61.0;
  const double p_second = (60 + eps) / (60 + 2 * eps);
  int second = 0;
  for (int i = 0; i < 10000; ++i) second += roulette_index(f, rng) == 1;
  const double sd = std::sqrt(10000 * p_second * (1 - p_second));
  EXPECT_NEAR(second, 10000 * p_second, 5 * sd);
  EXPECT_GT(second, 9950);

  const std::vector<double> negative{-10, -5};
  int favoured = 0;
  for (int i = 0; i < 10000; ++i) favoured += roulette_index(negative, rng) == 1;
  EXPECT_GT(favoured, 9900);
}

TEST(Recombine, EqualParentsAndBoundaryCut) {
  Rng rng(3);
  const AnswerMatrix p = random_genome(rng);
  for (int i = 0; i < 20; ++i) {
    const auto [c1, c2] = recombine(p, p, rng);
    EXPECT_EQ(c1, p);
    EXPECT_EQ(c2, p);
  }
  const AnswerMatrix p1 = random_genome(rng);
  const AnswerMatrix p2 = random_genome(rng);
  const auto [c1, c2] = recombine_at(p1, p2, 1);
  for (int i = 1; i < kStateCount; ++i) EXPECT_EQ(c1.at(i), p2.at(i));
  EXPECT_EQ(c1.at(0), p1.at(0));
  EXPECT_EQ(c2.at(0), p2.at(0));
  EXPECT_THROW(recombine_at(p1, p2, 0), std::logic_error);
  EXPECT_THROW(recombine_at(p1, p2, 24), std::logic_error);
}

TEST(Recombine, ConservesGenesAndCutsInsideTheGenome) {
  Rng rng(4);
  const AnswerMatrix ones = AnswerMatrix::filled(Action::MoveForwardEnemy);
  const AnswerMatrix twos = AnswerMatrix::filled(Action::GroupRunAway);
  std::map<int, int> cuts;
  for (int i = 0; i < 5000; ++i) {
    const auto [c1, c2] = recombine(ones, twos, rng);
    int cut = 0;
    while (cut < kStateCount && c1.at(cut) == Action::MoveForwardEnemy) ++cut;
    for (int g = 0; g < kStateCount; ++g) {
      EXPECT_EQ(c1.at(g), g < cut ? Action::MoveForwardEnemy : Action::GroupRunAway);
      EXPECT_EQ(c2.at(g), g < cut ? Action::GroupRunAway : Action::MoveForwardEnemy);
    }
    ++cuts[cut];
  }
  EXPECT_EQ(cuts.size(), 23u);
  EXPECT_EQ(cuts.begin()->first, 1);
  EXPECT_EQ(cuts.rbegin()->first, 23);

  for (int i = 0; i < 200; ++i) {
    const AnswerMatrix p1 = random_genome(rng);
    const AnswerMatrix p2 = random_genome(rng);
    const auto [c1, c2] = recombine(p1, p2, rng);
    for (int g = 0; g < kStateCount; ++g) {
      std::multiset<Action> parents{p1.at(g), p2.at(g)};
      std::multiset<Action> kids{c1.at(g), c2.at(g)};
      EXPECT_EQ(parents, kids);
    }
  }
}

TEST(Mutate, ExtremeRates) {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const AnswerMatrix g = random_genome(rng);
    EXPECT_EQ(mutate(g, 0.0, rng), g);
    const AnswerMatrix m = mutate(g, 1.0, rng);
    for (int s = 0; s < kStateCount; ++s) EXPECT_NE(m.at(s), g.at(s));
  }
}

TEST(Mutate, MeanChangedGenesMatchesBinomial) {
  Rng rng(6);
  const AnswerMatrix g = AnswerMatrix::filled(Action::Explore);
  long long changed = 0;
  std::map<Action, int> replacement;
  for (int i = 0; i < 10000; ++i) {
    const AnswerMatrix m = mutate(g, 0.01, rng);
    for (int s = 0; s < kStateCount; ++s) {
      if (m.at(s) != g.at(s)) ++changed, ++replacement[m.at(s)];
    }
  }
  EXPECT_NEAR(changed / 10000.0, 0.24, 0.02);
  EXPECT_EQ(replacement.size(), 5u);
  EXPECT_EQ(replacement.count(Action::Explore), 0u);
}

TEST(EAConfig, ParseAndValidate) {
  const EAConfig defaults;
  EXPECT_EQ(defaults.popsize, 50);
  EXPECT_EQ(defaults.max_generations, 125);
  const auto cfg = parse_ea_config("popsize = 12\np_x = 0.5\nmovement_scope = VpOnly\n");
  EXPECT_EQ(cfg.popsize, 12);
  EXPECT_EQ(cfg.p_x, 0.5);
  EXPECT_EQ(cfg.movement_scope, MovementScope::VpOnly);
  EXPECT_THROW(parse_ea_config("popsize = 1\n"), ConfigError);
  EXPECT_THROW(parse_ea_config("p_m = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_ea_config("movement_scope = Some\n"), ConfigError);
  EXPECT_THROW(parse_ea_config("generations = 3\n"), ConfigError);
  const auto full = load_ea_config(fixtures::data_path("configs/ea_full.cfg"));
  EXPECT_EQ(full.popsize, 50);
  EXPECT_EQ(full.p_x, 0.7);
  EXPECT_EQ(full.p_m, 0.01);
  EXPECT_EQ(full.max_generations, 125);
}

TEST(Evolve, BudgetElitismAndPopulationSize) {
  Rng pick(7);
  const AnswerMatrix target = random_genome(pick);
  std::atomic<long long> calls{0};
  const Evaluator eval = [&](const AnswerMatrix& g, std::uint64_t) {
    ++calls;
    return match_score(g, target);
  };
  EAConfig cfg;
  cfg.seed = 99;
  std::vector<std::size_t> sizes;
  std::vector<double> best;
  EvolveOptions opt;
  opt.on_population = [&](std::span<const EvaluatedIndividual> pop) {
    sizes.push_back(pop.size());
    double b = pop.front().fitness;
    for (const auto& ind : pop) b = std::max(b, ind.fitness);
    best.push_back(b);
  };
  const auto r = evolve_with(eval, rbp_default(), cfg, opt);
  EXPECT_EQ(calls.load(), 300);
  EXPECT_EQ(r.evaluations, 300);
  EXPECT_EQ(r.history.size(), 126u);
  EXPECT_EQ(r.history.back().evaluations, 300);
  for (std::size_t s : sizes) EXPECT_EQ(s, 50u);
  for (std::size_t i = 1; i < best.size(); ++i) EXPECT_GE(best[i], best[i - 1]);
  for (std::size_t i = 1; i < r.history.size(); ++i) {
    EXPECT_GE(r.history[i].best_fitness, r.history[i - 1].best_fitness);
  }
  EXPECT_EQ(r.best_fitness, best.back());
  for (const auto& ind : r.final_population) {
    std::vector<long long> genes;
    for (int i = 0; i < kStateCount; ++i) genes.push_back(action_number(ind.genome.at(i)));
    EXPECT_NO_THROW(validate_matrix(genes));
  }
}

TEST(Evolve, BudgetWithRepeatedEvaluations) {
  std::atomic<long long> calls{0};
  std::mutex m;
  std::set<std::uint64_t> seeds;
  const Evaluator eval = [&](const AnswerMatrix&, std::uint64_t seed) {
    ++calls;
    std::lock_guard lock(m);
    seeds.insert(seed);
    return 1.0;
  };
  EAConfig cfg;
  cfg.popsize = 6;
  cfg.max_generations = 4;
  cfg.evaluations_per_individual = 3;
  const auto r = evolve_with(eval, rbp_default(), cfg);
  EXPECT_EQ(r.evaluations, (6 + 2 * 4) * 3);
  EXPECT_EQ(calls.load(), r.evaluations);
  EXPECT_EQ(seeds.size(), static_cast<std::size_t>(r.evaluations));
}

TEST(Evolve, SeededIndividualSurvives) {
  const AnswerMatrix seed_vp = AnswerMatrix::filled(Action::ProtectFlag);
  const Evaluator eval = [&](const AnswerMatrix& g, std::uint64_t) { return g == seed_vp ? 1e6 : 0.0; };
  EAConfig cfg;
  cfg.popsize = 10;
  cfg.max_generations = 20;
  cfg.p_m = 0.5;
  const auto r = evolve_with(eval, seed_vp, cfg);
  EXPECT_EQ(r.best, seed_vp);
  EXPECT_EQ(r.best_fitness, 1e6);
}

TEST(Evolve, DeterministicAndThreadIndependent) {
  Rng pick(8);
  const AnswerMatrix target = random_genome(pick);
  const Evaluator eval = [&](const AnswerMatrix& g, std::uint64_t seed) {
    return match_score(g, target) + static_cast<double>(seed % 7) * 0.01;
  };
  EAConfig cfg;
  cfg.popsize = 20;
  cfg.max_generations = 40;
  cfg.seed = 5;
  const auto a = evolve_with(eval, rbp_default(), cfg);
  const auto b = evolve_with(eval, rbp_default(), cfg);
  cfg.threads = 4;
  const auto c = evolve_with(eval, rbp_default(), cfg);
  EXPECT_EQ(a.best, b.best);
  EXPECT_EQ(a.best, c.best);
  EXPECT_EQ(a.best_fitness, c.best_fitness);
  cfg.seed = 6;
  cfg.threads = 1;
  const auto d = evolve_with(eval, rbp_default(), cfg);
  EXPECT_NE(a.history, d.history);
}

TEST(Evolve, TiesBrokenAtRandom) {
  const Evaluator flat = [](const AnswerMatrix&, std::uint64_t) { return 0.0; };
  std::set<std::vector<int>> winners;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EAConfig cfg;
    cfg.popsize = 10;
    cfg.max_generations = 2;
    cfg.seed = seed;
    const auto r = evolve_with(flat, rbp_default(), cfg);
    std::vector<int> genes;
    for (int i = 0; i < kStateCount; ++i) genes.push_back(action_number(r.best.at(i)));
    winners.insert(genes);
  }
  EXPECT_GT(winners.size(), 1u);
}

TEST(Evolve, StopTokenInterrupts) {
  std::stop_source stop;
  EvolveOptions opt;
  opt.stop = stop.get_token();
  opt.on_generation = [&](const GenerationRecord& rec) {
    if (rec.generation == 3) stop.request_stop();
  };
  EAConfig cfg;
  cfg.popsize = 8;
  cfg.max_generations = 50;
  const auto r = evolve_with([](const AnswerMatrix&, std::uint64_t) { return 1.0; }, rbp_default(), cfg, opt);
  EXPECT_TRUE(r.interrupted);
  EXPECT_EQ(r.history.size(), 4u);
}

TEST(Evolve, BeatsOrMatchesTheSeededPlayerOffline) {
  const auto map = map_fixture("maps/arena_20x20.map");
  EAConfig cfg;
  cfg.popsize = 8;
  cfg.max_generations = 6;
  cfg.seed = 3;
  double seeded = 0;
  EvolveOptions opt;
  opt.on_population = [&](std::span<const EvaluatedIndividual> pop) {
    if (seeded == 0) {
      for (const auto& ind : pop) {
        if (ind.genome == rbp_default()) seeded = ind.fitness;
      }
    }
  };
  const auto r = evolve(rbp_default(), rbp_default(), cfg, map, desk_world(), opt);
  EXPECT_GE(r.best_fitness, seeded);
  EXPECT_EQ(r.evaluations, 8 + 2 * 6);
}
