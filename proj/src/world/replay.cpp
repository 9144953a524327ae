#include "wrts/world/replay.hpp"

#include <sstream>

#include "wrts/common/artifact_error.hpp"
#include "wrts/common/fnv.hpp"

namespace wrts {

namespace {

nlohmann::json cell_json(const Cell& c) { return nlohmann::json::array({c.x, c.y}); }

const char* kind_name(EventKind k) {
  switch (k) {
    case EventKind::Order: return "order";
    case EventKind::OrderRejected: return "order_rejected";
    case EventKind::Move: return "move";
    case EventKind::Combat: return "combat";
    case EventKind::Death: return "death";
    case EventKind::Capture: return "capture";
  }
  return "?";
}

Winner winner_from(const std::string& s) {
  if (s == "VP") return Winner::VP;
  if (s == "HP") return Winner::HP;
  if (s == "Draw") return Winner::Draw;
  throw std::invalid_argument("unknown winner '" + s + "'");
}

OutcomeReason reason_from(const std::string& s) {
  if (s == "FlagCaptured") return OutcomeReason::FlagCaptured;
  if (s == "DamageTiebreak") return OutcomeReason::DamageTiebreak;
  if (s == "Draw") return OutcomeReason::Draw;
  throw std::invalid_argument("unknown outcome reason '" + s + "'");
}

}  // namespace

nlohmann::json event_to_json(const Event& e) {
  nlohmann::json j;
  j["kind"] = kind_name(e.kind);
  j["unit_id"] = e.unit_id;
  switch (e.kind) {
    case EventKind::Order:
      j["action"] = action_number(e.action);
      j["state"] = e.state;
      break;
    case EventKind::OrderRejected:
      j["action"] = action_number(e.action);
      j["reason"] = e.reason;
      break;
    case EventKind::Move:
      j["from"] = cell_json(e.from);
      j["to"] = cell_json(e.to);
      break;
    case EventKind::Combat:
      j["damage"] = e.damage;
      j["opponent"] = e.other_id;
      break;
    case EventKind::Death:
      j["from"] = cell_json(e.from);
      break;
    case EventKind::Capture:
      j["to"] = cell_json(e.to);
      break;
  }
  return j;
}

nlohmann::json outcome_to_json(const Outcome& o) {
  return {{"winner", winner_name(o.winner)}, {"reason", reason_name(o.reason)},
          {"deaths_hp", o.deaths_hp},       {"deaths_vp", o.deaths_vp},
          {"movements", o.movements},       {"turns", o.turns}};
}

Outcome outcome_from_json(const nlohmann::json& j) {
  Outcome o;
  o.winner = winner_from(j.at("winner").get<std::string>());
  o.reason = reason_from(j.at("reason").get<std::string>());
  o.deaths_hp = j.at("deaths_hp").get<int>();
  o.deaths_vp = j.at("deaths_vp").get<int>();
  o.movements = j.at("movements").get<long long>();
  o.turns = j.at("turns").get<int>();
  return o;
}

std::string turn_report_line(const TurnReport& report) {
  nlohmann::json events = nlohmann::json::array();
  for (const Event& e : report.events) events.push_back(event_to_json(e));
  if (report.outcome) {
    nlohmann::json o = outcome_to_json(*report.outcome);
    o["kind"] = "outcome";
    events.push_back(std::move(o));
  }
  nlohmann::json line;
  line["turn"] = report.turn;
  line["events"] = std::move(events);
  return line.dump();
}

nlohmann::json serialize_state(const GameState& s) {
  nlohmann::json j;
  j["turn"] = s.turn;
  nlohmann::json units = nlohmann::json::array();
  for (const Unit& u : s.units) {
    units.push_back({{"id", u.id},
                     {"army", army_name(u.army)},
                     {"pos", cell_json(u.pos)},
                     {"health", u.health},
                     {"energy", u.energy},
                     {"order", action_number(u.current_order)},
                     {"alive", u.alive}});
  }
  j["units"] = std::move(units);
  nlohmann::json knowledge = nlohmann::json::array();
  for (const ArmyKnowledge& k : s.knowledge) {
    std::string explored(k.explored.size(), '0');
    for (std::size_t i = 0; i < k.explored.size(); ++i) explored[i] = k.explored[i] ? '1' : '0';
    nlohmann::json sightings = nlohmann::json::array();
    for (const Sighting& sg : k.last_seen_enemies) sightings.push_back({sg.cell.x, sg.cell.y, sg.turn});
    knowledge.push_back({{"explored", explored},
                         {"enemy_flag", k.enemy_flag_known ? cell_json(*k.enemy_flag_known) : nlohmann::json()},
                         {"sightings", std::move(sightings)}});
  }
  j["knowledge"] = std::move(knowledge);
  j["pheromone"] = s.pheromone;
  j["deaths"] = s.deaths;
  j["movements"] = s.movements;
  std::ostringstream rng;
  rng << s.rng.engine();
  j["rng"] = rng.str();
  j["outcome"] = s.final_outcome ? outcome_to_json(*s.final_outcome) : nlohmann::json();
  return j;
}

ReplayWriter::ReplayWriter(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw ArtifactError(ArtifactError::Kind::Missing, "cannot write replay " + path.string());
}

void ReplayWriter::write(const TurnReport& report) {
  const std::string line = turn_report_line(report);
  hash_ = fnv1a_append(hash_, line);
  hash_ = fnv1a_append(hash_, "\n");
  ++lines_;
  if (out_.is_open()) out_ << line << '\n';
}

std::vector<ReplayTurn> load_replay(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArtifactError(ArtifactError::Kind::Missing, "cannot open replay " + path.string());
  std::vector<ReplayTurn> out;
  std::string line;
  int line_no = 0;
  bool saw_outcome = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (saw_outcome) throw ArtifactError(ArtifactError::Kind::Malformed, "data after the deciding turn", line_no);
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("turn") || !j["turn"].is_number_integer() ||
        !j.contains("events") || !j["events"].is_array()) {
      throw ArtifactError(ArtifactError::Kind::Malformed, "malformed replay line", line_no);
    }
    for (const auto& e : j["events"]) {
      if (!e.is_object() || !e.contains("kind")) {
        throw ArtifactError(ArtifactError::Kind::Malformed, "malformed replay event", line_no);
      }
      if (e["kind"] == "outcome") saw_outcome = true;
    }
    out.push_back({j["turn"].get<int>(), std::move(j["events"])});
  }
  if (!saw_outcome) {
    throw ArtifactError(ArtifactError::Kind::Malformed, "replay ends before the game is decided", line_no + 1);
  }
  return out;
}

}  // namespace wrts
