#include "wrts/session/live_opponent.hpp"

#include <iostream>

namespace wrts::session {

LiveOpponent::LiveOpponent(const std::string& host, int port, ManagerSettings settings)
    : manager_(std::move(settings)) {
  server_ = std::make_unique<HttpServer>(manager_, [this] { return status(); });
  port_ = server_->bind(host, port);
  server_->start();
}

LiveOpponent::~LiveOpponent() { server_->stop(); }

nlohmann::json LiveOpponent::status() const {
  std::lock_guard lock(mu_);
  return {{"round", round_}, {"session", session_id_}};
}

pmea::OnlineGame LiveOpponent::play(const AnswerMatrix& vp, int game, const MapPtr& map, const WorldConfig& world,
                                    std::uint64_t seed, const std::filesystem::path& replay) {
  const auto session = manager_.create(map, world, vp, seed, std::nullopt, replay);
  {
    std::lock_guard lock(mu_);
    round_ = game;
    session_id_ = session->id();
  }
  std::cerr << "round " << game << ": session " << session->id() << " on port " << port_ << " waiting for a player\n";
  while (!session->wait_finished(std::chrono::seconds(1))) {
  }
  pmea::OnlineGame out;
  out.outcome = *session->outcome();
  out.recorded = session->recorder();
  out.replay_hash = session->replay_hash();
  out.seconds = session->play_seconds();
  out.unit_orders = static_cast<long long>(out.recorded.total_observations());
  return out;
}

}  // namespace wrts::session
