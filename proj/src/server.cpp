#include "gazescale/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <memory>

#include "gazescale/errors.hpp"

namespace gazescale {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxLine = 1 << 20;

bool send_line(int fd, const json& msg) {
  const std::string line = msg.dump() + "\n";
  std::size_t sent = 0;
  while (sent < line.size()) {
    const ssize_t n = ::send(fd, line.data() + sent, line.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

PlaygroundServer::PlaygroundServer(EngineConfig cfg, SessionRegistry::Clock::duration grace)
    : registry_(std::move(cfg), grace) {}

PlaygroundServer::~PlaygroundServer() { stop(); }

int PlaygroundServer::start(int port, const std::string& host) {
  if (running_) throw Error("server already running");
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw Error(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error("bad listen address " + host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 ||
      ::listen(listen_fd_, 16) < 0) {
    const std::string why = std::strerror(errno);
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error("cannot listen on " + host + ":" + std::to_string(port) + ": " + why);
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  running_ = true;
  acceptor_ = std::thread([this] { accept_loop(); });
  return ntohs(addr.sin_port);
}

void PlaygroundServer::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  listen_fd_ = -1;
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mu_);
    for (int fd : clients_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(workers_);
  }
  for (auto& w : workers) w.join();
}

void PlaygroundServer::accept_loop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (errno == EINTR) continue;
      break;  // listening socket closed
    }
    std::lock_guard lock(mu_);
    if (!running_) {
      ::close(fd);
      break;
    }
    clients_.insert(fd);
    workers_.emplace_back([this, fd] { serve(fd); });
  }
}

void PlaygroundServer::serve(int fd) {
  std::shared_ptr<PlaygroundSession> session;
  std::string buffer;
  char chunk[4096];
  bool open = true;

  auto handle_line = [&](const std::string& line) {
    json msg;
    try {
      msg = json::parse(line);
    } catch (const json::exception& e) {
      return send_line(fd, protocol_error("invalid_json", e.what()));
    }
    if (!session) {
      const bool hello = msg.is_object() && msg.value("type", "") == "hello";
      if (!hello) return send_line(fd, protocol_error("no_session", "send hello first"));
      registry_.sweep(SessionRegistry::Clock::now());
      if (msg.contains("resume")) {
        if (!msg["resume"].is_string()) {
          return send_line(fd, protocol_error("bad_request", "resume must be a session token"));
        }
        session = registry_.resume(msg["resume"].get<std::string>(), SessionRegistry::Clock::now());
        if (!session) {
          return send_line(fd, protocol_error("unknown_session", "session expired or in use"));
        }
      } else {
        session = registry_.create(Technique::PTZArea);
      }
      const json reply = session->handle(msg);
      if (reply["type"] == "error" && !msg.contains("resume")) {
        registry_.remove(session->token());
        session.reset();
      }
      return send_line(fd, reply);
    }
    return send_line(fd, session->handle(msg));
  };

  while (open && running_) {
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t pos;
    while (open && (pos = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      open = handle_line(line);
    }
    if (buffer.size() > kMaxLine) {
      send_line(fd, protocol_error("line_too_long", "message exceeds 1 MiB"));
      break;
    }
  }

  if (session) registry_.detach(session->token(), SessionRegistry::Clock::now());
  std::lock_guard lock(mu_);
  clients_.erase(fd);
  ::close(fd);
}

}  // namespace gazescale
