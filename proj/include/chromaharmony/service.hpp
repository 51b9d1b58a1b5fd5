// HTTP JSON API: stateless evaluation and generation plus in-memory palette
// sessions with a time-to-live.
#pragma once

#include "chromaharmony/engine.hpp"
#include "chromaharmony/json_io.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace httplib {
class Server;
}

namespace chromaharmony {

struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  std::chrono::seconds ttl{24 * 3600};
  std::string cors_origin = "*";

  /// Defaults overridden by CHROMAHARMONY_HOST, CHROMAHARMONY_PORT,
  /// CHROMAHARMONY_TTL (seconds) and CHROMAHARMONY_CORS_ORIGIN.
  static ServiceConfig from_env();
};

struct ApiResponse {
  int status = 200;
  json body;
};

/// Transport-independent request handlers. Bodies are raw JSON text so that
/// malformed input is handled here rather than by the transport.
class Api {
public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;

  explicit Api(ServiceConfig config = {}, Clock clock = std::chrono::steady_clock::now);

  ApiResponse evaluate(std::string_view body) const;
  ApiResponse generate(std::string_view body) const;

  ApiResponse create_session(std::string_view body);
  ApiResponse add_color(const std::string& id, std::string_view body);
  ApiResponse undo(const std::string& id);
  ApiResponse report(const std::string& id);
  ApiResponse suggestions(const std::string& id, std::optional<std::string_view> n);

  /// Drops expired sessions; returns how many were removed.
  std::size_t purge_expired();
  std::size_t session_count() const;

  const ServiceConfig& config() const { return config_; }

private:
  struct Entry {
    std::mutex mutex;  // serializes mutations; a busy mutex means 409
    Session session;
    std::chrono::steady_clock::time_point last_touched;

    explicit Entry(Session s) : session(std::move(s)) {}
  };

  std::shared_ptr<Entry> find(const std::string& id);
  ApiResponse session_view(const Entry& entry) const;

  ServiceConfig config_;
  Clock clock_;
  mutable std::mutex store_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

/// Registers the API routes, CORS handling and GET /healthz on server.
void bind_routes(httplib::Server& server, Api& api);

/// Blocking: serves until the process is stopped.
int run_server(const ServiceConfig& config);

}  // namespace chromaharmony
