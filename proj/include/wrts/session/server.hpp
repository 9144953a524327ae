#pragma once

#include <functional>
#include <memory>
#include <string>

#include "json.hpp"
#include "wrts/session/protocol.hpp"

namespace wrts::session {

/// HTTP transport for the protocol:
///   POST /api                   one protocol request per body
///   GET  /sessions/{id}/stream  server-sent events, one turn message each
///   GET  /pmea                  status of a bound PMEA run
///   GET  /health
class HttpServer {
 public:
  explicit HttpServer(SessionManager& manager, std::function<nlohmann::json()> pmea_status = {});
  ~HttpServer();

  /// Port 0 picks a free port. Returns the bound port; throws on failure.
  int bind(const std::string& host, int port);
  /// Serves on a background thread until stop().
  void start();
  /// Serves on the calling thread.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  double tick_rate = 2.0;
  std::string record_dir;
};

/// Blocks serving standalone sessions; returns a process exit code.
int serve(const ServeOptions& options);

}  // namespace wrts::session
