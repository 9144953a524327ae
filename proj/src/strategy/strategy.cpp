#include <string>

#include "wrts/strategy/action.hpp"
#include "wrts/strategy/answer_matrix.hpp"
#include "wrts/strategy/state_index.hpp"

namespace wrts {

std::string_view action_name(Action a) {
  switch (a) {
    case Action::MoveForwardEnemy: return "MoveForwardEnemy";
    case Action::GroupRunAway: return "GroupRunAway";
    case Action::MoveForwardObjective: return "MoveForwardObjective";
    case Action::NoOperation: return "NoOperation";
    case Action::Explore: return "Explore";
    case Action::ProtectFlag: return "ProtectFlag";
  }
  return "?";
}

StateIndex::StateIndex(int value) : value_(value) {
  if (value < 0 || value >= kStateCount) {
    throw std::out_of_range("state index " + std::to_string(value) + " outside 0..23");
  }
}

StateIndex state_index(const UnitPerception& p) {
  return StateIndex(8 * static_cast<int>(p.health) + 4 * static_cast<int>(p.advantage) +
                    2 * static_cast<int>(p.under_attack) + static_cast<int>(p.objective_visible));
}

UnitPerception decode_state(StateIndex index) {
  const int v = index.value();
  UnitPerception p;
  p.health = static_cast<HealthLevel>(v / 8);
  p.advantage = (v / 4) % 2 != 0;
  p.under_attack = (v / 2) % 2 != 0;
  p.objective_visible = v % 2 != 0;
  return p;
}

UnitPerception decode_state(int index) { return decode_state(StateIndex(index)); }

HealthLevel health_level(int health, int max_health) {
  // Bands: [0, ceil(max/3)), [ceil(max/3), ceil(2max/3)), [ceil(2max/3), max].
  const int low_end = (max_health + 2) / 3;
  const int medium_end = (2 * max_health + 2) / 3;
  if (health < low_end) return HealthLevel::Low;
  if (health < medium_end) return HealthLevel::Medium;
  return HealthLevel::High;
}

AnswerMatrix::AnswerMatrix() { cells_.fill(Action::Explore); }

AnswerMatrix AnswerMatrix::filled(Action a) {
  std::array<Action, kStateCount> cells;
  cells.fill(a);
  return AnswerMatrix(cells);
}

std::array<int, kStateCount> AnswerMatrix::to_ints() const {
  std::array<int, kStateCount> out{};
  for (std::size_t i = 0; i < cells_.size(); ++i) out[i] = action_number(cells_[i]);
  return out;
}

namespace {

std::string matrix_error_message(MatrixError::Kind kind, int position, long long value) {
  if (kind == MatrixError::Kind::BadLength) {
    return "answer matrix needs 24 actions, got " + std::to_string(value);
  }
  return "invalid action " + std::to_string(value) + " at position " + std::to_string(position);
}

}  // namespace

MatrixError::MatrixError(Kind kind, int position, long long value)
    : std::runtime_error(matrix_error_message(kind, position, value)),
      kind_(kind),
      position_(position),
      value_(value) {}

AnswerMatrix validate_matrix(std::span<const long long> raw) {
  if (raw.size() != static_cast<std::size_t>(kStateCount)) {
    throw MatrixError(MatrixError::Kind::BadLength, -1, static_cast<long long>(raw.size()));
  }
  std::array<Action, kStateCount> cells{};
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const auto a = action_from_int(raw[i]);
    if (!a) throw MatrixError(MatrixError::Kind::BadAction, static_cast<int>(i), raw[i]);
    cells[i] = *a;
  }
  return AnswerMatrix(cells);
}

AnswerMatrix rbp_default() {
  std::array<Action, kStateCount> cells{};
  for (int i = 0; i < kStateCount; ++i) {
    const UnitPerception p = decode_state(i);
    Action a = Action::Explore;
    if (p.objective_visible && !p.under_attack) {
      a = Action::MoveForwardObjective;
    } else if (p.under_attack && p.health == HealthLevel::Low) {
      a = Action::GroupRunAway;
    } else if (p.under_attack && p.advantage) {
      a = Action::MoveForwardEnemy;
    } else if (p.under_attack) {
      a = Action::GroupRunAway;
    } else if (p.advantage) {
      a = Action::MoveForwardEnemy;
    }
    cells[static_cast<std::size_t>(i)] = a;
  }
  return AnswerMatrix(cells);
}

nlohmann::json matrix_to_json(const AnswerMatrix& m) {
  nlohmann::json j;
  j["format"] = "answer-matrix-v1";
  j["actions"] = m.to_ints();
  return j;
}

AnswerMatrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("actions") || !j["actions"].is_array()) {
    throw std::invalid_argument("answer matrix document needs an 'actions' array");
  }
  std::vector<long long> raw;
  for (const auto& v : j["actions"]) {
    if (!v.is_number_integer()) throw MatrixError(MatrixError::Kind::BadAction, static_cast<int>(raw.size()), -1);
    raw.push_back(v.get<long long>());
  }
  return validate_matrix(raw);
}

}  // namespace wrts
