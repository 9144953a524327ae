#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wrts/session/session.hpp"

namespace wrts::session {

inline constexpr int kProtocolVersion = 1;

struct ManagerSettings {
  double tick_rate = 2.0;
  std::filesystem::path record_dir;
  std::uint64_t id_seed = 0;
};

class SessionManager {
 public:
  explicit SessionManager(ManagerSettings settings = {}) : settings_(std::move(settings)) {}

  std::shared_ptr<Session> create(MapPtr map, const WorldConfig& world, const AnswerMatrix& vp, std::uint64_t seed,
                                  std::optional<double> tick_rate = std::nullopt,
                                  const std::filesystem::path& replay = {});
  /// Throws SessionError(UnknownSession).
  std::shared_ptr<Session> get(const std::string& id) const;
  std::vector<std::string> ids() const;

 private:
  ManagerSettings settings_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::uint64_t counter_ = 0;
};

/// Request/response side of the wire protocol. Every message carries "v":1.
///   create  {map, world?, genome?, seed?, tick_rate?} -> created {session, view}
///   start   {session, run?}                            -> started {session, phase}
///   order   {session, units, action}                   -> ack {effective_turn, accepted, rejected}
///   view    {session}                                  -> view {view} (HP army)
///   advance {session}                                  -> turn {turn, events, view}
///   turns   {session, since?}                          -> turns {messages}
///   status  {session}                                  -> status {phase, turn, outcome?}
/// Failures answer {type:"error", code, message}; codes: BadRequest,
/// UnsupportedVersion, BadAction, BadGenome, BadMap, BadConfig, plus the
/// SessionError codes.
class ProtocolHandler {
 public:
  explicit ProtocolHandler(SessionManager& manager) : manager_(manager) {}

  nlohmann::json handle(const nlohmann::json& request);
  nlohmann::json handle_text(std::string_view body);

 private:
  nlohmann::json dispatch(const nlohmann::json& request);

  SessionManager& manager_;
};

nlohmann::json error_message(std::string_view code, std::string_view message);

}  // namespace wrts::session
