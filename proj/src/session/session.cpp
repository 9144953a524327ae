#include "wrts/session/session.hpp"

#include <algorithm>
#include <cstdio>

#include "wrts/pmea/artifacts.hpp"

namespace wrts::session {

const char* phase_name(Phase p) {
  switch (p) {
    case Phase::Lobby: return "Lobby";
    case Phase::Playing: return "Playing";
    case Phase::Finished: return "Finished";
  }
  return "?";
}

const char* error_code_name(SessionError::Code c) {
  switch (c) {
    case SessionError::Code::UnknownSession: return "UnknownSession";
    case SessionError::Code::NotStarted: return "NotStarted";
    case SessionError::Code::SessionClosed: return "SessionClosed";
    case SessionError::Code::AlreadyStarted: return "AlreadyStarted";
  }
  return "?";
}

std::string make_session_id(std::uint64_t seed, std::uint64_t counter) {
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(mix_seed(seed, counter, 0)),
                static_cast<unsigned long long>(mix_seed(seed, counter, 1)));
  return buf;
}

nlohmann::json order_log_to_json(const std::vector<OrderLogEntry>& log) {
  nlohmann::json out = nlohmann::json::array();
  for (const OrderLogEntry& e : log) {
    out.push_back({{"turn", e.submitted_turn},
                   {"action", action_number(e.action)},
                   {"units", e.unit_ids},
                   {"states", e.states}});
  }
  return out;
}

Session::Session(std::string id, MapPtr map, const WorldConfig& world, const AnswerMatrix& vp, std::uint64_t seed,
                 SessionSettings settings)
    : id_(std::move(id)),
      settings_(std::move(settings)),
      game_(spawn_game(std::move(map), world, seed)),
      vp_policy_(matrix_policy(vp)),
      replay_(settings_.replay.empty() ? ReplayWriter() : ReplayWriter(settings_.replay)) {}

Session::~Session() {
  if (runner_.joinable()) {
    runner_.request_stop();
    cv_.notify_all();
    runner_.join();
  }
}

Phase Session::phase() const {
  std::lock_guard lock(mu_);
  return phase_;
}

int Session::turn() const {
  std::lock_guard lock(mu_);
  return game_.turn;
}

void Session::start(bool run_loop) {
  {
    std::lock_guard lock(mu_);
    if (phase_ == Phase::Finished) throw SessionError(SessionError::Code::SessionClosed, "session is finished");
    if (phase_ == Phase::Playing) throw SessionError(SessionError::Code::AlreadyStarted, "session already started");
    phase_ = Phase::Playing;
    started_at_ = std::chrono::steady_clock::now();
  }
  if (run_loop && settings_.tick_rate > 0) runner_ = std::jthread([this](std::stop_token st) { loop(st); });
}

OrderAck Session::submit_order(std::span<const int> unit_ids, Action action) {
  std::lock_guard lock(mu_);
  if (phase_ == Phase::Finished) throw SessionError(SessionError::Code::SessionClosed, "session is finished");
  if (phase_ == Phase::Lobby) throw SessionError(SessionError::Code::NotStarted, "session not started");
  OrderAck ack;
  ack.effective_turn = game_.turn;
  OrderLogEntry entry;
  entry.submitted_turn = game_.turn;
  entry.action = action;
  for (const int id : unit_ids) {
    const bool known = id >= 0 && id < static_cast<int>(game_.units.size());
    const bool duplicate = std::find(ack.accepted.begin(), ack.accepted.end(), id) != ack.accepted.end();
    if (duplicate) continue;
    if (!known || game_.units[static_cast<std::size_t>(id)].army != Army::HP ||
        !game_.units[static_cast<std::size_t>(id)].alive) {
      ack.rejected.push_back(id);
      continue;
    }
    const StateIndex s = state_index(perceive(game_, game_.units[static_cast<std::size_t>(id)]));
    recorder_.record(s, action);
    ack.accepted.push_back(id);
    entry.unit_ids.push_back(id);
    entry.states.push_back(s.value());
  }
  if (!ack.accepted.empty()) {
    pending_.push_back({ack.accepted, action});
    log_.push_back(std::move(entry));
  }
  return ack;
}

StateView Session::view(Army army) const {
  std::lock_guard lock(mu_);
  return make_state_view(game_, army);
}

nlohmann::json Session::step_locked() {
  if (phase_ == Phase::Finished) throw SessionError(SessionError::Code::SessionClosed, "session is finished");
  if (phase_ == Phase::Lobby) throw SessionError(SessionError::Code::NotStarted, "session not started");
  const TurnReport report = step_turn(game_, pending_, vp_policy_);
  pending_.clear();
  replay_.write(report);
  nlohmann::json events = nlohmann::json::array();
  for (const Event& e : visible_events(game_, report.events, Army::HP)) events.push_back(event_to_json(e));
  nlohmann::json msg = {{"v", 1},
                        {"type", "turn"},
                        {"session", id_},
                        {"turn", report.turn},
                        {"events", events},
                        {"view", view_to_json(make_state_view(game_, Army::HP))}};
  if (report.outcome) msg["outcome"] = outcome_to_json(*report.outcome);
  messages_.push_back(msg);
  if (report.outcome) finish_locked();
  cv_.notify_all();
  return msg;
}

void Session::finish_locked() {
  phase_ = Phase::Finished;
  play_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_at_).count();
  if (!settings_.record_dir.empty()) {
    pmea::save_model(settings_.record_dir / ("session_" + id_ + ".model.json"), recorder_);
    pmea::write_json_artifact(settings_.record_dir / ("session_" + id_ + ".orders.json"),
                              {{"format", "order-log-v1"}, {"session", id_}, {"orders", order_log_to_json(log_)}});
  }
  finish_pending_ = true;
}

nlohmann::json Session::advance() {
  std::function<void(Session&)> callback;
  nlohmann::json msg;
  {
    std::lock_guard lock(mu_);
    msg = step_locked();
    if (finish_pending_) {
      finish_pending_ = false;
      callback = on_finish_;
    }
  }
  if (callback) callback(*this);
  return msg;
}

void Session::loop(std::stop_token stop) {
  const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / settings_.tick_rate));
  auto next = std::chrono::steady_clock::now() + period;
  while (!stop.stop_requested()) {
    {
      std::unique_lock lock(mu_);
      cv_.wait_until(lock, stop, next, [] { return false; });
      if (stop.stop_requested() || phase_ == Phase::Finished) return;
    }
    try {
      advance();
    } catch (const SessionError&) {
      return;
    }
    if (phase() == Phase::Finished) return;
    next += period;
  }
}

std::vector<nlohmann::json> Session::turn_messages(int since) const {
  std::lock_guard lock(mu_);
  std::vector<nlohmann::json> out;
  for (const auto& m : messages_) {
    if (m["turn"].get<int>() >= since) out.push_back(m);
  }
  return out;
}

bool Session::wait_for_turn(int turn, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [&] { return game_.turn > turn || phase_ == Phase::Finished; });
}

bool Session::wait_finished(std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  return cv_.wait_for(lock, timeout, [&] { return phase_ == Phase::Finished; });
}

ExtendedAnswerMatrix Session::recorder() const {
  std::lock_guard lock(mu_);
  return recorder_;
}

std::vector<OrderLogEntry> Session::order_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::optional<Outcome> Session::outcome() const {
  std::lock_guard lock(mu_);
  return game_.final_outcome;
}

std::uint64_t Session::replay_hash() const {
  std::lock_guard lock(mu_);
  return replay_.hash();
}

double Session::play_seconds() const {
  std::lock_guard lock(mu_);
  return play_seconds_;
}

void Session::on_finish(std::function<void(Session&)> callback) {
  std::lock_guard lock(mu_);
  on_finish_ = std::move(callback);
}

}  // namespace wrts::session
