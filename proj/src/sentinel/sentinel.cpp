#include "gridsec/sentinel/sentinel.hpp"

#include <algorithm>

#include "gridsec/errors.hpp"

namespace gridsec::sentinel {

const char* to_string(ChangeKind kind) { return kind == ChangeKind::kMetadata ? "metadata_change" : "content_change"; }

const char* to_string(Judgement judgement) {
  return judgement == Judgement::kAuthorized ? "authorized" : "unauthorized";
}

bool ProcessRegistry::running(const std::string& artifact_id) const {
  return std::any_of(procs_.begin(), procs_.end(), [&](const auto& kv) { return kv.second == artifact_id; });
}

const WatchedArtifact& Sentinel::watch(const std::string& id, ByteView content, std::uint64_t tick) {
  if (watched_.contains(id)) throw InvalidParameter("artifact already watched: " + id);
  auto [it, _] = watched_.emplace(id, WatchedArtifact{id, crypto::sha1(content), tick});
  return it->second;
}

std::optional<IntegrityEvent> Sentinel::on_event(const ChangeEvent& event, const ProcessRegistry& registry) {
  auto it = watched_.find(event.artifact_id);
  if (it == watched_.end()) {
    ++warnings_;
    return std::nullopt;
  }
  WatchedArtifact& w = it->second;

  IntegrityEvent out;
  out.tick = event.tick;
  out.artifact_id = event.artifact_id;
  out.kind = event.kind;
  out.judged = registry.running(event.artifact_id) ? Judgement::kAuthorized : Judgement::kUnauthorized;

  std::optional<crypto::Digest160> digest;
  if (event.kind == ChangeKind::kContent && event.new_content) {
    ++fingerprints_;
    digest = crypto::sha1(*event.new_content);
    out.content_differs = *digest != w.fingerprint;
  }

  if (out.judged == Judgement::kAuthorized) {
    // The baseline follows authorized changes only.
    w.last_modified_tick = event.tick;
    if (digest) w.fingerprint = *digest;
  } else {
    alerts_.push_back(Alert{event.tick, event.artifact_id, event.kind});
  }
  return out;
}

std::vector<Alert> Sentinel::drain_alerts() {
  std::vector<Alert> out(alerts_.begin(), alerts_.end());
  alerts_.clear();
  return out;
}

const WatchedArtifact* Sentinel::find(const std::string& id) const {
  auto it = watched_.find(id);
  return it == watched_.end() ? nullptr : &it->second;
}

}  // namespace gridsec::sentinel
