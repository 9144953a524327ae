#pragma once

#include <string>
#include <string_view>

#include "wrts/common/rng.hpp"
#include "wrts/strategy/answer_matrix.hpp"

namespace wrts::pmea {

/// Scripted stand-in for the human player. Built-ins:
///   rbp-mirror     plays rbp_default
///   aggressor      MoveForwardEnemy, GroupRunAway at Low health
///   turtle         ProtectFlag, MoveForwardObjective when the objective is visible
///   random(rho)    rbp_default, replaced by a uniform action with probability rho
///   drifter(g)     aggressor for g games, then turtle for g games, and so on
///   matrix(a,...)  a fixed answer matrix given as 24 integers
class Persona {
 public:
  /// Throws ConfigError for an unknown or malformed name.
  static Persona parse(std::string_view name);
  static Persona fixed(const AnswerMatrix& matrix, double noise = 0.0);

  const std::string& name() const { return name_; }
  double noise() const { return noise_; }

  /// The noise-free policy in force during game `game` (1-based).
  const AnswerMatrix& matrix_for_game(int game) const;

  Action decide(const UnitPerception& p, int game, Rng& rng) const;

 private:
  std::string name_;
  AnswerMatrix primary_;
  AnswerMatrix secondary_;
  int period_ = 0;  // games per phase when drifting, 0 otherwise
  double noise_ = 0.0;
};

AnswerMatrix aggressor_matrix();
AnswerMatrix turtle_matrix();

}  // namespace wrts::pmea
