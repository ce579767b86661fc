#pragma once

#include <cstdint>

#include "gridsec/crypto/op_count.hpp"

namespace gridsec::cost {

enum class Scheme { kHmacSha1, kAes128 };

const char* scheme_name(Scheme scheme);

/// Costs are accounted in 512-bit units: SHA-1's block size, and four
/// AES blocks.
inline constexpr std::uint64_t kUnitBits = 512;

/// Operation counts for one 512-bit unit.
///
/// HMAC-SHA1: 132 shifts and 762 XORs on 32-bit words.
/// AES-128:   132 shifts, 1214 XORs, 320 GF(2^8) multiplications,
///            44 8-bit multiplications and 68 GF(2^8) inverses.
crypto::OpCount unit_cost(Scheme scheme);

struct CostReport {
  Scheme scheme = Scheme::kHmacSha1;
  std::uint64_t message_bits = 0;
  std::uint64_t blocks = 0;  // ceil(message_bits / 512)
  crypto::OpCount ops;
};

/// Per-unit cost scaled by the unit count; a partial unit is padded to a
/// whole one. Throws InvalidParameter for zero bits and SizeError when a
/// tally would overflow 64 bits.
CostReport analytic_cost(Scheme scheme, std::uint64_t message_bits);

/// Byte-sized variant; throws SizeError when an HMAC-SHA1 message would
/// reach 2^64 bits.
CostReport analytic_cost_bytes(Scheme scheme, std::uint64_t message_bytes);

struct ChannelCost {
  CostReport compute;           // MAC cost of the wheat only
  double transfer_blocks = 0;   // wheat_blocks * (1 + chaff_ratio)
};

/// Chaff MACs are drawn at random, so compute cost ignores chaff_ratio.
ChannelCost channel_cost(std::uint64_t wheat_blocks, double chaff_ratio);

}  // namespace gridsec::cost
