#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>

#include "tactile/model/classifier.hpp"
#include "tactile/service/config.hpp"

namespace tactile::service {

struct ServeOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8765;  // 0 picks a free port
  std::chrono::milliseconds heartbeat{1000};
  std::chrono::milliseconds underrun{250};  // no frames for this long halts motion
};

/// Single-client WebSocket endpoint.
///
/// Inbound binary messages carry one or more wire records; inbound text messages are
/// JSON control messages {"type":"start"|"stop"|"set-config", ...}. Outbound text
/// messages are state records (one per tick), heartbeats, acks and error replies.
/// Each connection gets a fresh session (and so recalibrates). A second client is
/// refused while one is connected. Disconnect or "stop" halts motion with a
/// zero-twist state record.
class Server {
 public:
  Server(model::Model model, SessionConfig config, ServeOptions options = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Bound port; valid after construction.
  std::uint16_t port() const noexcept;

  /// Every outbound state record (including the final safety-stop record after a
  /// disconnect) is also passed here. Set before run().
  void set_event_sink(std::function<void(const std::string&)> sink);

  /// Serves until stop() is called.
  void run();
  /// Thread-safe.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace tactile::service
