#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "wrts/pmea/pmea.hpp"
#include "wrts/session/server.hpp"

namespace wrts::session {

/// PMEA opponent backed by a human: each round opens a session on an embedded
/// server and waits for the game to be played to the end through the protocol.
class LiveOpponent : public pmea::Opponent {
 public:
  LiveOpponent(const std::string& host, int port, ManagerSettings settings = {});
  ~LiveOpponent() override;

  std::string describe() const override { return "live"; }
  pmea::OnlineGame play(const AnswerMatrix& vp, int game, const MapPtr& map, const WorldConfig& world,
                        std::uint64_t seed, const std::filesystem::path& replay) override;

  int port() const { return port_; }
  SessionManager& manager() { return manager_; }

 private:
  nlohmann::json status() const;

  SessionManager manager_;
  std::unique_ptr<HttpServer> server_;
  int port_ = 0;
  mutable std::mutex mu_;
  int round_ = 0;
  std::string session_id_;
};

}  // namespace wrts::session
