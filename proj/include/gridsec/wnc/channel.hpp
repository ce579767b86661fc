#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "gridsec/crypto/hmac.hpp"
#include "gridsec/errors.hpp"
#include "gridsec/rng.hpp"
#include "gridsec/wnc/packet.hpp"

namespace gridsec::wnc {

enum class ChaffPayload {
  kComplement,  // bitwise complement of the partner wheat payload
  kRandom,      // fresh random bytes of the same length
};

struct ChannelConfig {
  crypto::MacKey key;
  /// Chaff packets per wheat packet; fractional values are honoured in
  /// expectation (floor(r) chaff, plus one more with probability r - floor(r)).
  double chaff_ratio = 1.0;
  /// MAC bits compared on receipt; a multiple of 8 in [8, 160].
  unsigned mac_bits = 160;
  std::uint64_t rng_seed = 0;
  ChaffPayload chaff_payload = ChaffPayload::kComplement;
  /// Truncation below 64 bits is refused unless this is set; it exists to
  /// make false-accept rates observable in statistical tests.
  bool audit_mode = false;

  /// Throws InvalidParameter on a bad ratio or truncation setting.
  void validate() const;
};

enum class Verdict { kWheat, kChaff };

/// HMAC-SHA1 over BE32(seq) | payload, truncated to `mac_bits` (trailing
/// bytes zeroed).
crypto::Digest160 packet_mac(const crypto::HmacSha1& hmac, unsigned mac_bits, std::uint32_t seq,
                             ByteView payload);

WcPacket make_wheat(const ChannelConfig& config, std::uint32_t seq, ByteView payload);
Verdict verify(const ChannelConfig& config, const WcPacket& packet);

/// Sending half of a channel session. Single owner; not thread-safe.
class Sender {
 public:
  /// With `ops`, every MAC computation is tallied into it.
  explicit Sender(ChannelConfig config, crypto::OpCount* ops = nullptr);

  WcPacket make_wheat(std::uint32_t seq, ByteView payload);
  /// Chaff never touches the MAC: its tag is drawn from the generator.
  WcPacket make_chaff(std::uint32_t seq, ByteView wheat_payload);

  /// One wheat per chunk with seq 0, 1, ..., with chaff interleaved at
  /// seeded positions within two wheat slots of their partner.
  std::vector<WcPacket> transmit(std::span<const Bytes> chunks);

  std::uint64_t mac_calls() const { return mac_calls_; }
  std::uint64_t chaff_count() const { return chaff_count_; }
  const ChannelConfig& config() const { return config_; }

 private:
  ChannelConfig config_;
  crypto::OpCount* ops_;
  crypto::HmacSha1 hmac_;
  Rng rng_;
  std::uint64_t mac_calls_ = 0;
  std::uint64_t chaff_count_ = 0;
};

/// Receiver-side bookkeeping while winnowing.
struct ReassemblyState {
  std::uint64_t expected_seq = 0;
  std::vector<Bytes> accepted;              // contiguous from seq 0
  std::map<std::uint32_t, Bytes> pending;   // accepted, waiting on a gap
  std::uint64_t rejected_count = 0;
};

/// Raised when accepted sequence numbers have a gap at end of stream.
class IncompleteStream : public Error {
 public:
  IncompleteStream(std::vector<Bytes> prefix, std::uint64_t rejected)
      : Error("incomplete stream: gap in accepted sequence numbers"),
        prefix_(std::move(prefix)),
        rejected_(rejected) {}

  const std::vector<Bytes>& prefix() const { return prefix_; }
  std::uint64_t rejected_count() const { return rejected_; }

 private:
  std::vector<Bytes> prefix_;
  std::uint64_t rejected_;
};

/// Receiving half of a channel session. Single owner; not thread-safe.
class Receiver {
 public:
  explicit Receiver(ChannelConfig config, crypto::OpCount* ops = nullptr);

  /// Accepts exactly the packets whose MAC verifies. A second verified
  /// packet for an already accepted seq is rejected (keep-first).
  Verdict push(const WcPacket& packet);

  /// Returns the reassembled payloads; throws IncompleteStream on a gap.
  std::vector<Bytes> finish();

  const ReassemblyState& state() const { return state_; }
  std::uint64_t mac_calls() const { return mac_calls_; }

 private:
  bool seen(std::uint32_t seq) const;

  ChannelConfig config_;
  crypto::OpCount* ops_;
  crypto::HmacSha1 hmac_;
  ReassemblyState state_;
  std::uint64_t mac_calls_ = 0;
};

struct WinnowResult {
  std::vector<Bytes> payloads;
  std::uint64_t rejected_count = 0;
};

std::vector<WcPacket> transmit(const ChannelConfig& config, std::span<const Bytes> chunks);
WinnowResult winnow(const ChannelConfig& config, std::span<const WcPacket> packets);

/// Splits a byte stream into chunks of at most `chunk_bytes` (1..1024).
std::vector<Bytes> chunk_stream(ByteView data, std::size_t chunk_bytes = kMaxPayloadBytes);
Bytes join(std::span<const Bytes> chunks);

}  // namespace gridsec::wnc
