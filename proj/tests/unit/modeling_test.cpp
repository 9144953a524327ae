#include <gtest/gtest.h>

#include <numeric>

#include "wrts/common/rng.hpp"
#include "wrts/modeling/extended_answer_matrix.hpp"

using namespace wrts;

namespace {

ExtendedAnswerMatrix with_row(int state, const std::array<std::uint64_t, kActionCount>& row) {
  std::array<ExtendedAnswerMatrix::Row, kStateCount> counts{};
  counts[static_cast<std::size_t>(state)] = row;
  return ExtendedAnswerMatrix::from_counts(counts);
}

ExtendedAnswerMatrix random_model(Rng& rng, int observations) {
  ExtendedAnswerMatrix m;
  for (int i = 0; i < observations; ++i) {
    m.record(StateIndex(static_cast<int>(rng.below(kStateCount))), kAllActions[rng.below(kActionCount)]);
  }
  return m;
}

}  // namespace

TEST(ExtendedAnswerMatrix, RecordSingleObservation) {
  ExtendedAnswerMatrix m;
  m.record(StateIndex(13), Action::MoveForwardObjective);
  for (int s = 0; s < kStateCount; ++s) {
    for (Action a : kAllActions) {
      EXPECT_EQ(m.count(StateIndex(s), a), s == 13 && a == Action::MoveForwardObjective ? 1u : 0u);
    }
  }
  EXPECT_EQ(m.row(StateIndex(13))[2], 1u);
  EXPECT_EQ(m.total_observations(), 1u);
}

TEST(ExtendedAnswerMatrix, GroupOrderIsOneRecordPerUnit) {
  ExtendedAnswerMatrix m;
  const UnitPerception p{HealthLevel::High, false, true, false};
  for (int unit = 0; unit < 5; ++unit) m.record(p, Action::GroupRunAway);
  EXPECT_EQ(m.count(state_index(p), Action::GroupRunAway), 5u);
  EXPECT_EQ(m.total_observations(), 5u);
}

TEST(ExtendedAnswerMatrix, Probabilities) {
  const auto m = with_row(4, {2, 3, 5, 0, 0, 0});
  const auto p = m.probabilities(StateIndex(4));
  ASSERT_TRUE(p);
  const std::array<double, 6> want{0.2, 0.3, 0.5, 0, 0, 0};
  for (int a = 0; a < 6; ++a) EXPECT_DOUBLE_EQ((*p)[static_cast<std::size_t>(a)], want[static_cast<std::size_t>(a)]);
  EXPECT_FALSE(m.probabilities(StateIndex(5)));
  const auto degenerate = with_row(0, {0, 0, 0, 7, 0, 0}).probabilities(StateIndex(0));
  EXPECT_EQ(*degenerate, (std::array<double, 6>{0, 0, 0, 1, 0, 0}));
}

TEST(ExtendedAnswerMatrix, ProbabilitiesAreDistributions) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = random_model(rng, 1 + static_cast<int>(rng.below(200)));
    std::uint64_t total = 0;
    for (int s = 0; s < kStateCount; ++s) {
      total += m.row_total(StateIndex(s));
      const auto p = m.probabilities(StateIndex(s));
      EXPECT_EQ(p.has_value(), m.row_total(StateIndex(s)) > 0);
      if (!p) continue;
      for (double v : *p) EXPECT_GE(v, 0.0);
      EXPECT_NEAR(std::accumulate(p->begin(), p->end(), 0.0), 1.0, 1e-9);
    }
    EXPECT_EQ(total, m.total_observations());
  }
}

TEST(ExtractPolicy, ArgmaxFallbackAndTies) {
  const AnswerMatrix fallback = AnswerMatrix::filled(Action::Explore);
  EXPECT_EQ(extract_policy(with_row(3, {10, 50, 20, 10, 5, 5}), fallback).at(3), Action::GroupRunAway);
  EXPECT_EQ(extract_policy(with_row(3, {10, 50, 20, 10, 5, 5}), fallback).at(4), Action::Explore);
  EXPECT_EQ(extract_policy(with_row(3, {4, 4, 0, 0, 0, 0}), fallback).at(3), Action::MoveForwardEnemy);
  EXPECT_EQ(extract_policy(with_row(3, {0, 0, 0, 0, 4, 4}), fallback).at(3), Action::Explore);
  EXPECT_EQ(extract_policy(ExtendedAnswerMatrix{}, rbp_default()), rbp_default());
}

TEST(ExtractPolicy, ScalingARowKeepsTheChoice) {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = random_model(rng, 60);
    auto scaled = m.counts();
    const int row = static_cast<int>(rng.below(kStateCount));
    const std::uint64_t k = 1 + rng.below(9);
    for (auto& c : scaled[static_cast<std::size_t>(row)]) c *= k;
    EXPECT_EQ(extract_policy(m, rbp_default()), extract_policy(ExtendedAnswerMatrix::from_counts(scaled), rbp_default()));
  }
}

TEST(Merge, IdentityCommutativityAssociativity) {
  Rng rng(3);
  const auto a = random_model(rng, 30);
  const auto b = random_model(rng, 40);
  const auto c = random_model(rng, 50);
  EXPECT_EQ(merge(a, ExtendedAnswerMatrix{}), a);
  EXPECT_EQ(merge(a, b), merge(b, a));
  EXPECT_EQ(merge(merge(a, b), c), merge(a, merge(b, c)));
  EXPECT_EQ(merge(a, b).total_observations(), 70u);
  ExtendedAnswerMatrix one;
  one.record(StateIndex(0), Action::Explore);
  ExtendedAnswerMatrix two;
  two.record(StateIndex(1), Action::NoOperation);
  EXPECT_EQ(merge(one, two).total_observations(), 2u);
}

TEST(ModelJson, RoundTripAndErrors) {
  Rng rng(8);
  const auto m = random_model(rng, 80);
  const auto j = model_to_json(m);
  EXPECT_EQ(j["format"], "extended-answer-matrix-v1");
  EXPECT_EQ(model_from_json(j), m);
  auto bad = j;
  bad["counts"].erase(0);
  EXPECT_THROW(model_from_json(bad), std::invalid_argument);
  bad = j;
  bad["counts"][0][0] = -1;
  EXPECT_THROW(model_from_json(bad), std::invalid_argument);
  bad = j;
  bad["format"] = "extended-answer-matrix-v2";
  EXPECT_THROW(model_from_json(bad), std::invalid_argument);
}
