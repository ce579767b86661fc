#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "gridsec/errors.hpp"
#include "gridsec/modarith.hpp"
#include "gridsec/sim/topology.hpp"
#include "gridsec/wnc/channel.hpp"

namespace gridsec::sim {

enum class KeyScheme { kSpatial, kTemporal };
enum class Strategy { kRecordOnly, kSpatialReconstruct, kTemporalGuess, kWinnowAttempt };

const char* to_string(KeyScheme scheme);
const char* to_string(Strategy strategy);

struct KeyExchangeConfig {
  KeyScheme scheme = KeyScheme::kSpatial;
  std::size_t key_bits = 128;
  /// Spatial: shares needed; the share count is the DRM's path count.
  std::size_t threshold = 2;
  /// Spatial: share field prime.
  std::uint64_t field_prime = kDefaultPrime;
  /// Temporal: the prime pre-shared between broker and DRM.
  std::uint64_t prime = kDefaultPrime;
  std::size_t parts = 4;
  /// Temporal: ticks between successive packets.
  std::uint64_t packet_interval = 10;
};

struct ChannelSettings {
  double chaff_ratio = 1.0;
  unsigned mac_bits = 160;
  bool audit_mode = false;
  wnc::ChaffPayload chaff_payload = wnc::ChaffPayload::kComplement;
  std::size_t chunk_bytes = 256;
};

struct JobSettings {
  std::size_t count = 1;
  std::size_t payload_bytes = 1024;
};

struct AdversaryConfig {
  std::string name;
  std::vector<EdgeKey> taps;
  Strategy strategy = Strategy::kRecordOnly;
  bool knows_mac_key = false;
  bool knows_prime = false;
  /// temporal_guess candidates; empty means the first 64 primes above L.
  std::vector<std::uint64_t> candidate_primes;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  Topology topology;
  KeyExchangeConfig key_exchange;
  ChannelSettings channel;
  JobSettings jobs;
  std::vector<AdversaryConfig> adversaries;
  std::set<std::string> compromised_drms;

  /// Checks the topology and every cross reference; throws ConfigError.
  void validate() const;
};

/// Configuration problem located by source, line (0 when unknown) and key path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& path, const std::string& what);
  std::size_t line() const { return line_; }
  const std::string& path() const { return path_; }
  /// The message without the location prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string path_;
  std::string detail_;
};

Scenario parse_scenario(const std::string& text, const std::string& source = "<scenario>");
Scenario load_scenario(const std::string& file);

}  // namespace gridsec::sim
