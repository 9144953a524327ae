#include "wrts/pmea/persona.hpp"

#include <cctype>
#include <vector>

#include "wrts/common/kv_config.hpp"

namespace wrts::pmea {

AnswerMatrix aggressor_matrix() {
  AnswerMatrix m;
  for (int i = 0; i < kStateCount; ++i) {
    m.set(i, decode_state(i).health == HealthLevel::Low ? Action::GroupRunAway : Action::MoveForwardEnemy);
  }
  return m;
}

AnswerMatrix turtle_matrix() {
  AnswerMatrix m;
  for (int i = 0; i < kStateCount; ++i) {
    m.set(i, decode_state(i).objective_visible ? Action::MoveForwardObjective : Action::ProtectFlag);
  }
  return m;
}

namespace {

/// Splits "head(args)" into head and args; args empty without parentheses.
bool split_call(std::string_view name, std::string_view& head, std::string_view& args) {
  const auto open = name.find('(');
  if (open == std::string_view::npos) {
    head = name;
    args = {};
    return true;
  }
  if (name.back() != ')') return false;
  head = name.substr(0, open);
  args = name.substr(open + 1, name.size() - open - 2);
  return true;
}

}  // namespace

Persona Persona::fixed(const AnswerMatrix& matrix, double noise) {
  Persona p;
  p.primary_ = matrix;
  p.secondary_ = matrix;
  p.noise_ = noise;
  p.name_ = "matrix(";
  for (int i = 0; i < kStateCount; ++i) p.name_ += (i ? "," : "") + std::to_string(action_number(matrix.at(i)));
  p.name_ += ")";
  return p;
}

Persona Persona::parse(std::string_view name) {
  std::string_view head;
  std::string_view args;
  if (!split_call(name, head, args)) throw ConfigError("malformed persona name '" + std::string(name) + "'");
  Persona p;
  p.name_ = std::string(name);
  if (head == "rbp-mirror" && args.empty()) {
    p.primary_ = p.secondary_ = rbp_default();
  } else if (head == "aggressor" && args.empty()) {
    p.primary_ = p.secondary_ = aggressor_matrix();
  } else if (head == "turtle" && args.empty()) {
    p.primary_ = p.secondary_ = turtle_matrix();
  } else if (head == "random") {
    p.primary_ = p.secondary_ = rbp_default();
    p.noise_ = parse_real("random persona noise", args);
    if (!(p.noise_ >= 0.0 && p.noise_ <= 1.0)) throw ConfigError("random persona noise must lie in [0,1]");
  } else if (head == "drifter") {
    p.period_ = parse_int("drifter period", args);
    if (p.period_ < 1) throw ConfigError("drifter period must be positive");
    p.primary_ = aggressor_matrix();
    p.secondary_ = turtle_matrix();
  } else if (head == "matrix") {
    std::vector<long long> raw;
    std::size_t start = 0;
    while (start <= args.size()) {
      const auto comma = std::min(args.find(',', start), args.size());
      raw.push_back(parse_int64("matrix persona action", args.substr(start, comma - start)));
      start = comma + 1;
    }
    try {
      p.primary_ = p.secondary_ = validate_matrix(raw);
    } catch (const MatrixError& e) {
      throw ConfigError(std::string("matrix persona: ") + e.what());
    }
  } else {
    throw ConfigError("unknown persona '" + std::string(name) + "'");
  }
  return p;
}

const AnswerMatrix& Persona::matrix_for_game(int game) const {
  if (period_ == 0) return primary_;
  return ((game - 1) / period_) % 2 == 0 ? primary_ : secondary_;
}

Action Persona::decide(const UnitPerception& p, int game, Rng& rng) const {
  if (noise_ > 0.0 && rng.bernoulli(noise_)) return kAllActions[rng.below(kActionCount)];
  return matrix_action(matrix_for_game(game), p);
}

}  // namespace wrts::pmea
