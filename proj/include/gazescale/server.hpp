#pragma once

#include <atomic>
#include <chrono>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "gazescale/config.hpp"
#include "gazescale/playground.hpp"

namespace gazescale {

/// TCP server for the playground protocol: newline-delimited JSON, one
/// session per connection, first message must be a hello.
class PlaygroundServer {
 public:
  explicit PlaygroundServer(EngineConfig cfg,
                            SessionRegistry::Clock::duration grace = std::chrono::seconds(10));
  ~PlaygroundServer();

  PlaygroundServer(const PlaygroundServer&) = delete;
  PlaygroundServer& operator=(const PlaygroundServer&) = delete;

  /// Binds and starts accepting. Port 0 picks a free port. Returns the bound
  /// port; throws Error if the socket cannot be bound.
  int start(int port, const std::string& host = "127.0.0.1");
  void stop();

  SessionRegistry& registry() { return registry_; }

 private:
  void accept_loop();
  void serve(int fd);

  SessionRegistry registry_;
  int listen_fd_ = -1;
  std::atomic<bool> running_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::vector<std::thread> workers_;
  std::set<int> clients_;
};

}  // namespace gazescale
