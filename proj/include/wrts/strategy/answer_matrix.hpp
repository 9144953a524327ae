#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "wrts/strategy/action.hpp"
#include "wrts/strategy/state_index.hpp"

namespace wrts {

/// One controller: the action every unit of an army takes in each of the 24
/// perception states. Also the genome evolved between games.
class AnswerMatrix {
 public:
  /// All cells Explore.
  AnswerMatrix();
  explicit AnswerMatrix(const std::array<Action, kStateCount>& cells) : cells_(cells) {}

  static AnswerMatrix filled(Action a);

  Action operator[](StateIndex i) const { return cells_[static_cast<std::size_t>(i.value())]; }
  Action at(int i) const { return cells_.at(static_cast<std::size_t>(i)); }
  void set(int i, Action a) { cells_.at(static_cast<std::size_t>(i)) = a; }

  const std::array<Action, kStateCount>& cells() const { return cells_; }
  std::array<int, kStateCount> to_ints() const;

  friend bool operator==(const AnswerMatrix&, const AnswerMatrix&) = default;

 private:
  std::array<Action, kStateCount> cells_;
};

class MatrixError : public std::runtime_error {
 public:
  enum class Kind { BadLength, BadAction };

  MatrixError(Kind kind, int position, long long value);

  Kind kind() const { return kind_; }
  int position() const { return position_; }
  long long value() const { return value_; }

 private:
  Kind kind_;
  int position_;
  long long value_;
};

/// Accepts exactly 24 integers in 1..6.
AnswerMatrix validate_matrix(std::span<const long long> raw);

inline Action matrix_action(const AnswerMatrix& m, const UnitPerception& p) { return m[state_index(p)]; }

/// The default expert policy that seeds adaptation. Rules, first match wins:
///   visible & !attacked           -> MoveForwardObjective
///   attacked & health Low         -> GroupRunAway
///   attacked & advantage          -> MoveForwardEnemy
///   attacked & !advantage         -> GroupRunAway
///   !attacked & advantage         -> MoveForwardEnemy
///   otherwise                     -> Explore
AnswerMatrix rbp_default();

/// {"format":"answer-matrix-v1","actions":[...24 ints]}
nlohmann::json matrix_to_json(const AnswerMatrix& m);
AnswerMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace wrts
