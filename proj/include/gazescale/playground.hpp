#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <json.hpp>

#include "gazescale/config.hpp"
#include "gazescale/interaction.hpp"
#include "gazescale/trace.hpp"

namespace gazescale {

inline constexpr int kProtocolVersion = 1;

nlohmann::json event_to_json(const ModeEvent& e);

/// One interactive session: a single object, a target ghost and an Interaction.
///
/// Every request is a JSON object with "type" and "version". Replies:
///   hello        -> welcome
///   frame        -> state
///   config_get   -> config
///   config_patch -> config (patch applied) or error (config unchanged)
///   reset        -> welcome
/// Any failure yields {"type": "error", "code": ..., "message": ...} and leaves
/// the session as it was.
class PlaygroundSession {
 public:
  PlaygroundSession(std::string token, EngineConfig cfg, Technique technique = Technique::PTZArea);

  nlohmann::json handle(const nlohmann::json& request);

  const std::string& token() const { return token_; }
  const Interaction& interaction() const { return *interaction_; }
  const EngineConfig& config() const { return cfg_; }

  /// Wire frame to engine frame. Head and eyes default to the fixed virtual
  /// camera; a held pinch button collapses that hand's fingertips onto its
  /// hand position.
  static Frame frame_from_wire(const nlohmann::json& msg);

 private:
  nlohmann::json welcome() const;
  nlohmann::json on_hello(const nlohmann::json& msg);
  nlohmann::json on_frame(const nlohmann::json& msg);
  nlohmann::json on_config_patch(const nlohmann::json& msg);
  nlohmann::json on_reset(const nlohmann::json& msg);
  void rebuild();

  std::string token_;
  EngineConfig cfg_;
  Technique technique_;
  TrialSpec scene_;
  std::unique_ptr<Interaction> interaction_;
  std::optional<ModeEvent> last_event_;
};

nlohmann::json protocol_error(const std::string& code, const std::string& message);

/// Sessions by token, kept alive for a grace period after their connection drops.
class SessionRegistry {
 public:
  using Clock = std::chrono::steady_clock;

  explicit SessionRegistry(EngineConfig cfg, Clock::duration grace = std::chrono::seconds(10));

  /// Fresh attached session.
  std::shared_ptr<PlaygroundSession> create(Technique technique);
  /// Reattaches a detached session whose grace period has not run out.
  std::shared_ptr<PlaygroundSession> resume(const std::string& token, Clock::time_point now);
  void detach(const std::string& token, Clock::time_point now);
  void remove(const std::string& token);
  /// Drops detached sessions older than the grace period.
  void sweep(Clock::time_point now);

  std::size_t size() const;

 private:
  struct Entry {
    std::shared_ptr<PlaygroundSession> session;
    std::optional<Clock::time_point> detached_at;
  };

  EngineConfig cfg_;
  Clock::duration grace_;
  mutable std::mutex mu_;
  std::map<std::string, Entry> sessions_;
  std::uint64_t next_id_ = 1;
};

}  // namespace gazescale
