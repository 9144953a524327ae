#include "wrts/session/protocol.hpp"

#include <sstream>

#include "wrts/common/kv_config.hpp"

namespace wrts::session {

namespace {

/// A request that cannot be served, with its wire error code.
struct ProtocolFault {
  std::string code;
  std::string message;
};

[[noreturn]] void fail(std::string code, std::string message) { throw ProtocolFault{std::move(code), std::move(message)}; }

const nlohmann::json& field(const nlohmann::json& r, const char* name) {
  if (!r.contains(name)) fail("BadRequest", std::string("missing field '") + name + "'");
  return r[name];
}

std::string session_field(const nlohmann::json& r) {
  const auto& s = field(r, "session");
  if (!s.is_string()) fail("BadRequest", "'session' must be a string");
  return s.get<std::string>();
}

AnswerMatrix parse_genome(const nlohmann::json& j) {
  if (!j.is_array()) fail("BadGenome", "genome must be an array of 24 actions");
  std::vector<long long> raw;
  for (const auto& v : j) {
    if (!v.is_number_integer()) fail("BadGenome", "genome entries must be integers");
    raw.push_back(v.get<long long>());
  }
  try {
    return validate_matrix(raw);
  } catch (const MatrixError& e) {
    fail("BadGenome", e.what());
  }
}

WorldConfig parse_world(const nlohmann::json& j) {
  if (!j.is_object()) fail("BadConfig", "world must be an object");
  std::string text;
  for (const auto& [key, value] : j.items()) {
    text += key + " = " + (value.is_string() ? value.get<std::string>() : value.dump()) + "\n";
  }
  try {
    return parse_world_config(text);
  } catch (const ConfigError& e) {
    fail("BadConfig", e.what());
  }
}

nlohmann::json reply(const char* type) { return {{"v", kProtocolVersion}, {"type", type}}; }

}  // namespace

std::shared_ptr<Session> SessionManager::create(MapPtr map, const WorldConfig& world, const AnswerMatrix& vp,
                                                std::uint64_t seed, std::optional<double> tick_rate,
                                                const std::filesystem::path& replay) {
  SessionSettings s;
  s.tick_rate = tick_rate.value_or(settings_.tick_rate);
  s.record_dir = settings_.record_dir;
  s.replay = replay;
  std::lock_guard lock(mu_);
  const std::string id = make_session_id(mix_seed(settings_.id_seed, seed), counter_++);
  auto session = std::make_shared<Session>(id, std::move(map), world, vp, seed, std::move(s));
  sessions_[id] = session;
  return session;
}

std::shared_ptr<Session> SessionManager::get(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw SessionError(SessionError::Code::UnknownSession, "unknown session " + id);
  return it->second;
}

std::vector<std::string> SessionManager::ids() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [id, _] : sessions_) out.push_back(id);
  return out;
}

nlohmann::json error_message(std::string_view code, std::string_view message) {
  nlohmann::json j = reply("error");
  j["code"] = code;
  j["message"] = message;
  return j;
}

nlohmann::json ProtocolHandler::handle_text(std::string_view body) {
  const auto request = nlohmann::json::parse(body, nullptr, false);
  if (request.is_discarded()) return error_message("BadRequest", "body is not JSON");
  return handle(request);
}

nlohmann::json ProtocolHandler::handle(const nlohmann::json& request) {
  try {
    if (!request.is_object()) fail("BadRequest", "request must be an object");
    if (!request.contains("v") || request["v"] != kProtocolVersion) {
      fail("UnsupportedVersion", "protocol version must be 1");
    }
    return dispatch(request);
  } catch (const ProtocolFault& f) {
    return error_message(f.code, f.message);
  } catch (const SessionError& e) {
    return error_message(error_code_name(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return error_message("BadRequest", e.what());
  }
}

nlohmann::json ProtocolHandler::dispatch(const nlohmann::json& r) {
  const auto& type_field = field(r, "type");
  if (!type_field.is_string()) fail("BadRequest", "'type' must be a string");
  const std::string type = type_field.get<std::string>();

  if (type == "create") {
    const auto& map_text = field(r, "map");
    if (!map_text.is_string()) fail("BadMap", "map must be the map text");
    MapPtr map;
    try {
      map = std::make_shared<const MapData>(load_map(map_text.get<std::string>()));
    } catch (const MapError& e) {
      fail("BadMap", e.what());
    }
    const WorldConfig world = r.contains("world") ? parse_world(r["world"]) : WorldConfig{};
    const AnswerMatrix genome = r.contains("genome") ? parse_genome(r["genome"]) : rbp_default();
    const std::uint64_t seed = r.value("seed", std::uint64_t{0});
    std::optional<double> tick_rate;
    if (r.contains("tick_rate")) {
      if (!r["tick_rate"].is_number() || r["tick_rate"].get<double>() < 0) fail("BadRequest", "bad tick_rate");
      tick_rate = r["tick_rate"].get<double>();
    }
    const auto session = manager_.create(map, world, genome, seed, tick_rate);
    nlohmann::json out = reply("created");
    out["session"] = session->id();
    out["view"] = view_to_json(session->view(Army::HP));
    return out;
  }

  const auto session = manager_.get(session_field(r));
  if (type == "start") {
    session->start(r.value("run", true));
    nlohmann::json out = reply("started");
    out["session"] = session->id();
    out["phase"] = phase_name(session->phase());
    return out;
  }
  if (type == "order") {
    const auto& action = field(r, "action");
    if (!action.is_number_integer() || !action_from_int(action.get<long long>())) {
      fail("BadAction", "action must be an integer in 1..6");
    }
    const auto& units = field(r, "units");
    if (!units.is_array()) fail("BadRequest", "units must be an array of ids");
    std::vector<int> ids;
    for (const auto& u : units) {
      if (!u.is_number_integer()) fail("BadRequest", "unit ids must be integers");
      ids.push_back(u.get<int>());
    }
    const OrderAck ack = session->submit_order(ids, *action_from_int(action.get<long long>()));
    nlohmann::json out = reply("ack");
    out["session"] = session->id();
    out["effective_turn"] = ack.effective_turn;
    out["accepted"] = ack.accepted;
    out["rejected"] = ack.rejected;
    return out;
  }
  if (type == "view") {
    if (r.value("army", std::string("HP")) != "HP") fail("BadRequest", "only the HP view is served");
    nlohmann::json out = reply("view");
    out["session"] = session->id();
    out["view"] = view_to_json(session->view(Army::HP));
    return out;
  }
  if (type == "advance") return session->advance();
  if (type == "turns") {
    nlohmann::json out = reply("turns");
    out["session"] = session->id();
    out["messages"] = session->turn_messages(r.value("since", 0));
    return out;
  }
  if (type == "status") {
    nlohmann::json out = reply("status");
    out["session"] = session->id();
    out["phase"] = phase_name(session->phase());
    out["turn"] = session->turn();
    if (const auto o = session->outcome()) out["outcome"] = outcome_to_json(*o);
    return out;
  }
  fail("BadRequest", "unknown request type '" + type + "'");
}

}  // namespace wrts::session
