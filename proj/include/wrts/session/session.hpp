#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "wrts/modeling/extended_answer_matrix.hpp"
#include "wrts/session/state_view.hpp"
#include "wrts/world/replay.hpp"

namespace wrts::session {

enum class Phase { Lobby, Playing, Finished };
const char* phase_name(Phase p);

class SessionError : public std::runtime_error {
 public:
  enum class Code { UnknownSession, NotStarted, SessionClosed, AlreadyStarted };
  SessionError(Code code, const std::string& message) : std::runtime_error(message), code_(code) {}
  Code code() const { return code_; }

 private:
  Code code_;
};
const char* error_code_name(SessionError::Code c);

struct OrderAck {
  int effective_turn = 0;
  std::vector<int> accepted;
  std::vector<int> rejected;
};

/// One accepted submission, with each unit's perception index at submission.
struct OrderLogEntry {
  int submitted_turn = 0;
  Action action = Action::NoOperation;
  std::vector<int> unit_ids;
  std::vector<int> states;
};

struct SessionSettings {
  double tick_rate = 2.0;             // turns per second in run_loop
  std::filesystem::path replay;       // empty: no replay file
  std::filesystem::path record_dir;   // empty: recorder not persisted on finish
};

/// One live game. The human plays the HP army through submit_order; the VP
/// army is driven by a genome fixed at creation. Every public member is
/// serialized on the session mutex, so each call observes a turn boundary.
class Session {
 public:
  Session(std::string id, MapPtr map, const WorldConfig& world, const AnswerMatrix& vp, std::uint64_t seed,
          SessionSettings settings = {});
  ~Session();
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  const std::string& id() const { return id_; }
  Phase phase() const;
  int turn() const;

  /// Lobby -> Playing. With a positive tick rate also starts run_loop.
  void start(bool run_loop = true);

  /// Queues the order for the next turn boundary and records one observation
  /// per accepted unit. Ids of dead, foreign or unknown units are rejected.
  OrderAck submit_order(std::span<const int> unit_ids, Action action);

  StateView view(Army army) const;

  /// Steps exactly one turn; returns the HP turn message.
  nlohmann::json advance();

  /// Turn messages with turn >= since, oldest first.
  std::vector<nlohmann::json> turn_messages(int since) const;
  /// Blocks until a message for `turn` exists, the game finishes, or timeout.
  bool wait_for_turn(int turn, std::chrono::milliseconds timeout) const;
  /// Blocks until Finished or timeout.
  bool wait_finished(std::chrono::milliseconds timeout) const;

  ExtendedAnswerMatrix recorder() const;
  std::vector<OrderLogEntry> order_log() const;
  std::optional<Outcome> outcome() const;
  std::uint64_t replay_hash() const;
  double play_seconds() const;

  /// Called once, outside the session lock, after the game is decided.
  void on_finish(std::function<void(Session&)> callback);

 private:
  nlohmann::json step_locked();
  void finish_locked();
  void loop(std::stop_token stop);

  const std::string id_;
  SessionSettings settings_;
  mutable std::mutex mu_;
  mutable std::condition_variable_any cv_;
  GameState game_;
  UnitPolicy vp_policy_;
  Phase phase_ = Phase::Lobby;
  std::vector<GroupOrder> pending_;
  ExtendedAnswerMatrix recorder_;
  std::vector<OrderLogEntry> log_;
  std::vector<nlohmann::json> messages_;
  ReplayWriter replay_;
  std::chrono::steady_clock::time_point started_at_;
  double play_seconds_ = 0.0;
  std::function<void(Session&)> on_finish_;
  bool finish_pending_ = false;
  std::jthread runner_;
};

/// 32 lowercase hex characters derived from (seed, counter).
std::string make_session_id(std::uint64_t seed, std::uint64_t counter);

nlohmann::json order_log_to_json(const std::vector<OrderLogEntry>& log);

}  // namespace wrts::session
