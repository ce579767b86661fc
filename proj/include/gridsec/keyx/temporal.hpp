#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gridsec/bytes.hpp"
#include "gridsec/errors.hpp"
#include "gridsec/modarith.hpp"
#include "gridsec/rng.hpp"
#include "gridsec/secret_key.hpp"

namespace gridsec::keyx {

/// The received evaluations do not describe a monic polynomial with the
/// expected number of planted roots.
class TamperError : public Error {
 public:
  using Error::Error;
};

/// Parameters of a temporal exchange. The prime is the pre-shared secret;
/// key length and part count travel in the exchange header.
struct TemporalParams {
  std::uint64_t p = kDefaultPrime;
  std::size_t key_bits = 0;
  std::size_t parts = 0;

  /// Throws InvalidParameter unless p is prime, p > L and 2 <= N <= L.
  void validate() const;
  std::size_t slot_bytes() const { return (key_bits + 7) / 8; }
};

/// Split boundaries R_1 < ... < R_{N-1}, counted in bits from the most
/// significant end; part i spans [R_{i-1}, R_i) with R_0 = 0, R_N = L.
struct SplitPlan {
  std::vector<std::uint64_t> positions;

  void validate(const TemporalParams& params) const;
};

struct TemporalPacket {
  std::uint16_t seq = 0;  // part index, 1-based
  Bytes slot;             // part bits left-aligned, then random fill
  std::uint64_t x = 0;
  std::uint64_t y = 0;    // P(x) mod p

  friend bool operator==(const TemporalPacket&, const TemporalPacket&) = default;
};

inline constexpr std::uint16_t kExchangeMagic = 0x5453;

struct TemporalExchange {
  std::uint16_t key_bits = 0;
  std::uint16_t parts = 0;
  std::vector<TemporalPacket> packets;
};

/// Draws a uniform split plan and distinct evaluation points from
/// [L+1, p-1], evaluates P(x) = prod (x - R_i) mod p and emits N packets in
/// seq order. Requires p - 1 - L >= N.
TemporalExchange temporal_send(const SecretKey& key, const TemporalParams& params, Rng& rng);
TemporalExchange temporal_send(const SecretKey& key, const TemporalParams& params, std::uint64_t seed);

/// Same construction with an explicit plan and evaluation points (distinct
/// field elements); only the slot fill is drawn from `rng`.
TemporalExchange build_exchange(const SecretKey& key, const TemporalParams& params, const SplitPlan& plan,
                                std::span<const std::uint64_t> xs, Rng& rng);

/// Interpolates P from the N points, checks it is monic of degree N-1 with
/// exactly N-1 roots in [1, L-1], and reassembles the key. Packets may
/// arrive in any order. Throws TamperError when the structural check
/// fails, MalformedInput on duplicate x or inconsistent framing.
SecretKey temporal_receive(std::span<const TemporalPacket> packets, const TemporalParams& params);

/// Split positions recovered by the receiver (the roots of P in [1, L-1]).
std::vector<std::uint64_t> recover_split_positions(std::span<const TemporalPacket> packets,
                                                   const TemporalParams& params);

struct DecodeAttempt {
  std::uint64_t prime = 0;
  bool valid = false;  // structurally valid decode under this prime
  std::optional<SecretKey> key;
  std::string reason;
};

struct AttackReport {
  std::vector<DecodeAttempt> attempts;
  std::size_t valid_decodes = 0;
  double valid_rate() const {
    return attempts.empty() ? 0.0 : static_cast<double>(valid_decodes) / static_cast<double>(attempts.size());
  }
};

/// Runs the receiver under every candidate prime and reports which ones
/// produce a structurally valid decode.
AttackReport adversary_attack(std::span<const TemporalPacket> packets, std::span<const std::uint64_t> candidates,
                              std::size_t key_bits, std::size_t parts);

/// seq(2) | slot_len(2) | slot | x(8) | y(8), big-endian.
void encode_packet_to(Bytes& out, const TemporalPacket& packet);
TemporalPacket decode_packet(ByteReader& in);

/// Header magic(2) | L(2) | N(2), followed by the N packets.
Bytes encode_exchange(const TemporalExchange& exchange);
TemporalExchange decode_exchange(ByteView data);

}  // namespace gridsec::keyx
