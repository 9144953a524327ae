#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "json.hpp"
#include "wrts/strategy/answer_matrix.hpp"

namespace wrts {

/// Observation counts of the player's orders per perception state: the
/// empirical version of the answer matrix, from which a deterministic player
/// model is extracted.
class ExtendedAnswerMatrix {
 public:
  using Row = std::array<std::uint64_t, kActionCount>;

  /// One observation: `action` was ordered for a unit perceiving `p`.
  void record(const UnitPerception& p, Action action);
  void record(StateIndex state, Action action);

  std::uint64_t count(StateIndex state, Action action) const;
  const Row& row(StateIndex state) const { return counts_[static_cast<std::size_t>(state.value())]; }
  std::uint64_t row_total(StateIndex state) const;
  std::uint64_t total_observations() const { return total_; }
  bool observed(StateIndex state) const { return row_total(state) > 0; }

  /// Normalised row; nullopt for a state that was never observed.
  std::optional<std::array<double, kActionCount>> probabilities(StateIndex state) const;

  /// Element-wise sum.
  friend ExtendedAnswerMatrix merge(const ExtendedAnswerMatrix& a, const ExtendedAnswerMatrix& b);

  friend bool operator==(const ExtendedAnswerMatrix&, const ExtendedAnswerMatrix&) = default;

  const std::array<Row, kStateCount>& counts() const { return counts_; }
  /// Throws std::invalid_argument on a malformed table.
  static ExtendedAnswerMatrix from_counts(const std::array<Row, kStateCount>& counts);

 private:
  std::array<Row, kStateCount> counts_{};
  std::uint64_t total_ = 0;
};

/// Per state: the most frequent action (ties: lowest action number), or the
/// fallback's action when the state was never observed.
AnswerMatrix extract_policy(const ExtendedAnswerMatrix& model, const AnswerMatrix& fallback);

/// {"format":"extended-answer-matrix-v1","counts":[[6 ints] x 24]}
nlohmann::json model_to_json(const ExtendedAnswerMatrix& m);
ExtendedAnswerMatrix model_from_json(const nlohmann::json& j);

}  // namespace wrts
