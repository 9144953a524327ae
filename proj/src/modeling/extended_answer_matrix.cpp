#include "wrts/modeling/extended_answer_matrix.hpp"

#include <numeric>
#include <stdexcept>

namespace wrts {

void ExtendedAnswerMatrix::record(const UnitPerception& p, Action action) { record(state_index(p), action); }

void ExtendedAnswerMatrix::record(StateIndex state, Action action) {
  ++counts_[static_cast<std::size_t>(state.value())][action_slot(action)];
  ++total_;
}

std::uint64_t ExtendedAnswerMatrix::count(StateIndex state, Action action) const {
  return counts_[static_cast<std::size_t>(state.value())][action_slot(action)];
}

std::uint64_t ExtendedAnswerMatrix::row_total(StateIndex state) const {
  const Row& r = row(state);
  return std::accumulate(r.begin(), r.end(), std::uint64_t{0});
}

std::optional<std::array<double, kActionCount>> ExtendedAnswerMatrix::probabilities(StateIndex state) const {
  const std::uint64_t total = row_total(state);
  if (total == 0) return std::nullopt;
  std::array<double, kActionCount> p{};
  const Row& r = row(state);
  for (std::size_t a = 0; a < p.size(); ++a) p[a] = static_cast<double>(r[a]) / static_cast<double>(total);
  return p;
}

ExtendedAnswerMatrix merge(const ExtendedAnswerMatrix& a, const ExtendedAnswerMatrix& b) {
  ExtendedAnswerMatrix out = a;
  for (std::size_t i = 0; i < out.counts_.size(); ++i) {
    for (std::size_t k = 0; k < out.counts_[i].size(); ++k) out.counts_[i][k] += b.counts_[i][k];
  }
  out.total_ += b.total_;
  return out;
}

ExtendedAnswerMatrix ExtendedAnswerMatrix::from_counts(const std::array<Row, kStateCount>& counts) {
  ExtendedAnswerMatrix m;
  m.counts_ = counts;
  for (const Row& r : counts) m.total_ += std::accumulate(r.begin(), r.end(), std::uint64_t{0});
  return m;
}

AnswerMatrix extract_policy(const ExtendedAnswerMatrix& model, const AnswerMatrix& fallback) {
  AnswerMatrix out = fallback;
  for (int i = 0; i < kStateCount; ++i) {
    const StateIndex s(i);
    if (!model.observed(s)) continue;
    const auto& r = model.row(s);
    std::size_t best = 0;
    for (std::size_t a = 1; a < r.size(); ++a) {
      if (r[a] > r[best]) best = a;  // strict: ties keep the lower action
    }
    out.set(i, kAllActions[best]);
  }
  return out;
}

nlohmann::json model_to_json(const ExtendedAnswerMatrix& m) {
  nlohmann::json j;
  j["format"] = "extended-answer-matrix-v1";
  j["counts"] = m.counts();
  return j;
}

ExtendedAnswerMatrix model_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("counts") || !j["counts"].is_array() || j["counts"].size() != kStateCount) {
    throw std::invalid_argument("model document needs 24 count rows");
  }
  if (j.contains("format") && j["format"] != "extended-answer-matrix-v1") {
    throw std::invalid_argument("unsupported model format");
  }
  std::array<ExtendedAnswerMatrix::Row, kStateCount> counts{};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto& row = j["counts"][i];
    if (!row.is_array() || row.size() != kActionCount) {
      throw std::invalid_argument("model row " + std::to_string(i) + " needs 6 counts");
    }
    for (std::size_t a = 0; a < counts[i].size(); ++a) {
      if (!row[a].is_number_unsigned() && !(row[a].is_number_integer() && row[a].get<long long>() >= 0)) {
        throw std::invalid_argument("model counts must be non-negative integers");
      }
      counts[i][a] = row[a].get<std::uint64_t>();
    }
  }
  return ExtendedAnswerMatrix::from_counts(counts);
}

}  // namespace wrts
