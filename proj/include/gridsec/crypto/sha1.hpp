#pragma once

#include <array>
#include <cstdint>

#include "gridsec/bytes.hpp"
#include "gridsec/crypto/op_count.hpp"

namespace gridsec::crypto {

inline constexpr std::size_t kDigestBytes = 20;
using Digest160 = std::array<std::uint8_t, kDigestBytes>;

/// Incremental SHA-1 (FIPS 180-1).
///
/// When constructed with an OpCount, every compression tallies the 32-bit
/// XORs and shifts it executes. The digest is identical either way.
class Sha1 {
 public:
  static constexpr std::size_t kBlockBytes = 64;
  /// Messages must stay below 2^64 bits.
  static constexpr std::uint64_t kMaxMessageBytes = (std::uint64_t{1} << 61) - 1;

  Sha1() = default;
  explicit Sha1(OpCount& ops) : ops_(&ops) {}

  /// Throws SizeError once the total input would reach 2^64 bits.
  void update(ByteView data);
  Digest160 finish();

  std::uint64_t bytes_processed() const { return total_; }

  /// Redirects (or, with nullptr, stops) tallying for subsequent work.
  void set_tally(OpCount* ops) { ops_ = ops; }

 private:
  void compress(const std::uint8_t* block);

  std::array<std::uint32_t, 5> h_{0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
  std::array<std::uint8_t, kBlockBytes> buf_{};
  std::size_t buf_len_ = 0;
  std::uint64_t total_ = 0;
  OpCount* ops_ = nullptr;
};

Digest160 sha1(ByteView message);
Digest160 sha1(ByteView message, OpCount& ops);

}  // namespace gridsec::crypto
