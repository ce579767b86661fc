#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gridsec/crypto/hmac.hpp"
#include "gridsec/crypto/op_count.hpp"
#include "gridsec/rng.hpp"
#include "gridsec/secret_key.hpp"
#include "gridsec/sentinel/sentinel.hpp"
#include "gridsec/sim/scenario.hpp"
#include "gridsec/wnc/channel.hpp"

namespace gridsec::sim {

/// DRM-side check of the broker's MAC'd challenge. A challenge is accepted
/// when its MAC verifies and its seq has not been accepted before, so a
/// recorded challenge replayed later is refused.
class DrmAuthenticator {
 public:
  explicit DrmAuthenticator(const crypto::MacKey& key, crypto::OpCount* ops = nullptr);
  bool accept(const wnc::WcPacket& challenge);
  std::uint64_t mac_calls() const { return receiver_.mac_calls(); }

 private:
  wnc::Receiver receiver_;
};

/// Broker-side challenge: a 16-byte nonce under `seq`.
wnc::WcPacket make_challenge(const crypto::MacKey& key, std::uint32_t seq, Rng& rng, crypto::OpCount* ops = nullptr);

/// What one adversary achieved against one DRM's key exchange.
struct TargetOutcome {
  std::string drm;
  std::size_t observed = 0;  // shares or temporal packets seen
  bool recovered = false;
  /// Spatial, small fields only: secrets consistent with the shares seen
  /// for the first key chunk.
  std::optional<std::uint64_t> consistent_secrets;
  std::optional<std::uint64_t> field_size;
  /// Temporal guessing without the prime.
  std::size_t candidates = 0;
  std::size_t valid_decodes = 0;
};

struct AdversaryVerdict {
  std::string name;
  Strategy strategy = Strategy::kRecordOnly;
  std::uint64_t packets_seen = 0;
  std::uint64_t bytes_seen = 0;
  std::vector<TargetOutcome> targets;
  // Winnowing attempt over observed channel traffic.
  std::uint64_t wheat_seen = 0;
  std::uint64_t chaff_seen = 0;
  std::uint64_t wheat_accepted = 0;
  std::uint64_t chaff_accepted = 0;
  std::size_t jobs_recovered = 0;

  /// Any key or job payload recovered.
  bool recovered() const;
};

struct DrmOutcome {
  bool key_established = false;
  bool key_matches = false;  // ground truth: equals the broker's key
  bool authenticated = false;
  std::uint64_t addressed = 0;  // channel packets delivered to this DRM
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::size_t jobs_done = 0;
  std::size_t jobs_failed = 0;
};

struct NodeStats {
  crypto::OpCount ops;
  std::uint64_t mac_tags = 0;    // MACs computed to send
  std::uint64_t mac_checks = 0;  // MACs recomputed to verify
  std::uint64_t mac_calls() const { return mac_tags + mac_checks; }
};

struct ScenarioResult {
  std::string name;
  std::uint64_t seed = 0;
  std::uint64_t final_tick = 0;
  std::map<std::string, SecretKey> distributed_keys;  // broker's key per DRM
  std::map<std::string, DrmOutcome> drms;
  std::map<std::string, NodeStats> nodes;
  std::uint64_t packets_on_wire = 0;
  std::uint64_t bytes_on_wire = 0;
  std::uint64_t wheat = 0;  // channel packets carrying data
  std::uint64_t chaff = 0;
  std::size_t jobs_sent = 0;
  std::size_t results_verified = 0;
  std::vector<sentinel::Alert> alerts;  // as received by the broker
  std::vector<AdversaryVerdict> adversaries;
  /// JSON Lines. Adversary observations are kept apart so that runs with
  /// and without taps can be compared record for record.
  std::vector<std::string> event_log;
  std::vector<std::string> observation_log;

  std::string event_log_text() const;
  std::string observation_log_text() const;
  /// Human-readable summary table.
  std::string summary() const;
  /// One JSON object with the counters and verdicts (no secrets).
  std::string summary_json() const;
};

/// Runs the scripted phases: key exchange, authentication, job transfer
/// over the chaffing channel, result return; then the adversaries' analyses.
/// Identical (scenario, seed) gives an identical result.
ScenarioResult run_scenario(const Scenario& scenario, std::uint64_t seed);
inline ScenarioResult run_scenario(const Scenario& scenario) { return run_scenario(scenario, scenario.seed); }

}  // namespace gridsec::sim
