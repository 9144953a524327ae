#include "wrts/session/server.hpp"

#include <iostream>
#include <thread>

#include "httplib.h"

namespace wrts::session {

struct HttpServer::Impl {
  SessionManager& manager;
  ProtocolHandler handler;
  std::function<nlohmann::json()> pmea_status;
  httplib::Server server;
  std::thread thread;

  Impl(SessionManager& m, std::function<nlohmann::json()> status)
      : manager(m), handler(m), pmea_status(std::move(status)) {}
};

namespace {

constexpr const char* kJson = "application/json";

}  // namespace

HttpServer::HttpServer(SessionManager& manager, std::function<nlohmann::json()> pmea_status)
    : impl_(std::make_unique<Impl>(manager, std::move(pmea_status))) {
  auto& srv = impl_->server;
  Impl* impl = impl_.get();

  srv.Post("/api", [impl](const httplib::Request& req, httplib::Response& res) {
    res.set_content(impl->handler.handle_text(req.body).dump(), kJson);
  });

  srv.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(nlohmann::json{{"v", kProtocolVersion}, {"type", "health"}}.dump(), kJson);
  });

  srv.Get("/pmea", [impl](const httplib::Request&, httplib::Response& res) {
    nlohmann::json j = impl->pmea_status ? impl->pmea_status() : nlohmann::json{{"round", nullptr}};
    j["v"] = kProtocolVersion;
    j["type"] = "pmea";
    res.set_content(j.dump(), kJson);
  });

  srv.Get(R"(/sessions/([0-9a-f]+)/stream)", [impl](const httplib::Request& req, httplib::Response& res) {
    std::shared_ptr<Session> session;
    try {
      session = impl->manager.get(req.matches[1]);
    } catch (const SessionError& e) {
      res.status = 404;
      res.set_content(error_message(error_code_name(e.code()), e.what()).dump(), kJson);
      return;
    }
    auto next = std::make_shared<int>(0);
    res.set_chunked_content_provider("text/event-stream", [session, next](size_t, httplib::DataSink& sink) {
      session->wait_for_turn(*next, std::chrono::milliseconds(500));
      for (const auto& msg : session->turn_messages(*next)) {
        const std::string frame = "data: " + msg.dump() + "\n\n";
        if (!sink.write(frame.data(), frame.size())) return false;
        *next = msg["turn"].get<int>() + 1;
      }
      if (session->phase() == Phase::Finished && session->turn_messages(*next).empty()) {
        sink.done();
        return false;
      }
      return sink.is_writable();
    });
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::start() {
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int serve(const ServeOptions& options) {
  ManagerSettings settings;
  settings.tick_rate = options.tick_rate;
  settings.record_dir = options.record_dir;
  SessionManager manager(settings);
  HttpServer server(manager);
  const int port = server.bind(options.host, options.port);
  std::cerr << "session service on http://" << options.host << ":" << port << "\n";
  server.run();
  return 0;
}

}  // namespace wrts::session
