#pragma once

#include <cstdint>
#include <vector>

#include "gridsec/bytes.hpp"
#include "gridsec/crypto/sha1.hpp"

namespace gridsec::wnc {

inline constexpr std::size_t kMaxPayloadBytes = 1024;

/// On-wire framing constants.
inline constexpr std::uint16_t kMagic = 0x5743;
inline constexpr std::uint8_t kVersion = 0x01;
inline constexpr std::uint8_t kTypeData = 0x00;
inline constexpr std::size_t kHeaderBytes = 10;

/// A data packet. Whether it is wheat or chaff is not a property of the
/// packet: it depends only on whether the MAC verifies under a given key.
struct WcPacket {
  std::uint32_t seq = 0;
  Bytes payload;
  crypto::Digest160 mac{};

  friend bool operator==(const WcPacket&, const WcPacket&) = default;
};

/// magic(2) | version(1) | type(1) | seq(4) | payload_len(2) | payload | mac(20),
/// all big-endian. Throws SizeError for an empty or oversize payload.
void encode_to(Bytes& out, const WcPacket& packet);
Bytes encode(const WcPacket& packet);

/// Reads one packet; throws MalformedInput on bad framing.
WcPacket decode(ByteReader& in);
std::vector<WcPacket> decode_stream(ByteView data);

}  // namespace gridsec::wnc
