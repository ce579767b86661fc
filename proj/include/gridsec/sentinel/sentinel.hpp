#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridsec/bytes.hpp"
#include "gridsec/crypto/sha1.hpp"

namespace gridsec::sentinel {

enum class ChangeKind { kMetadata, kContent };
enum class Judgement { kAuthorized, kUnauthorized };

const char* to_string(ChangeKind kind);
const char* to_string(Judgement judgement);

struct WatchedArtifact {
  std::string id;
  crypto::Digest160 fingerprint{};
  std::uint64_t last_modified_tick = 0;
};

/// Point-in-time view of the active processes and the artifact each runs.
class ProcessRegistry {
 public:
  void start(std::uint64_t pid, std::string artifact_id) { procs_[pid] = std::move(artifact_id); }
  void stop(std::uint64_t pid) { procs_.erase(pid); }
  bool running(const std::string& artifact_id) const;
  std::size_t size() const { return procs_.size(); }

 private:
  std::map<std::uint64_t, std::string> procs_;
};

/// A change notification from the metadata provider. For content changes
/// the provider may attach the new content.
struct ChangeEvent {
  std::uint64_t tick = 0;
  ChangeKind kind = ChangeKind::kMetadata;
  std::string artifact_id;
  std::optional<Bytes> new_content;
};

struct IntegrityEvent {
  std::uint64_t tick = 0;
  std::string artifact_id;
  ChangeKind kind = ChangeKind::kMetadata;
  Judgement judged = Judgement::kAuthorized;
  /// Set for content changes that carried content: whether it differs from
  /// the current fingerprint.
  std::optional<bool> content_differs;

  friend bool operator==(const IntegrityEvent&, const IntegrityEvent&) = default;
};

/// Relayed to the resource broker for every unauthorized change.
struct Alert {
  std::uint64_t tick = 0;
  std::string artifact_id;
  ChangeKind kind = ChangeKind::kMetadata;

  friend bool operator==(const Alert&, const Alert&) = default;
};

/// Listener that judges changes to watched artifacts.
///
/// A change is authorized exactly when a process running the artifact is
/// present in the registry snapshot supplied with the event; otherwise an
/// alert is queued. Single owner; the caller serializes events.
class Sentinel {
 public:
  /// Throws InvalidParameter when the artifact is already watched.
  const WatchedArtifact& watch(const std::string& id, ByteView content, std::uint64_t tick = 0);

  /// Returns nullopt (and counts a warning) for unwatched artifacts.
  std::optional<IntegrityEvent> on_event(const ChangeEvent& event, const ProcessRegistry& registry);

  std::vector<Alert> drain_alerts();
  const std::deque<Alert>& pending_alerts() const { return alerts_; }

  const WatchedArtifact* find(const std::string& id) const;
  std::uint64_t warnings() const { return warnings_; }
  /// Digests computed while judging events (registration excluded).
  std::uint64_t fingerprint_computations() const { return fingerprints_; }

 private:
  std::map<std::string, WatchedArtifact> watched_;
  std::deque<Alert> alerts_;
  std::uint64_t warnings_ = 0;
  std::uint64_t fingerprints_ = 0;
};

}  // namespace gridsec::sentinel
