#pragma once

#include <array>
#include <cstdint>

#include "gridsec/bytes.hpp"
#include "gridsec/crypto/op_count.hpp"

namespace gridsec::crypto {

using AesBlock = std::array<std::uint8_t, 16>;

/// AES-128 block cipher (FIPS 197), single-block ECB only.
///
/// The plain path uses precomputed S-box tables. The instrumented path
/// computes every S-box entry on the fly (GF(2^8) inverse followed by the
/// affine map) so inverses and multiplications are observable in the tally.
class Aes128 {
 public:
  static constexpr std::size_t kBlockBytes = 16;
  static constexpr std::size_t kKeyBytes = 16;

  /// Throws SizeError unless the key is exactly 16 bytes.
  explicit Aes128(ByteView key);
  /// Key schedule computed without tables, tallied into `ops`.
  Aes128(ByteView key, OpCount& ops);

  void encrypt(const std::uint8_t* in, std::uint8_t* out) const;
  void decrypt(const std::uint8_t* in, std::uint8_t* out) const;

  /// Size-checked forms; throw SizeError unless the block is 16 bytes.
  AesBlock encrypt(ByteView block) const;
  AesBlock decrypt(ByteView block) const;
  AesBlock encrypt(ByteView block, OpCount& ops) const;

 private:
  std::array<std::uint8_t, 176> round_keys_{};
};

AesBlock aes128_encrypt_block(ByteView key, ByteView block);
AesBlock aes128_decrypt_block(ByteView key, ByteView block);
AesBlock aes128_encrypt_block(ByteView key, ByteView block, OpCount& ops);

namespace gf256 {

/// Product in GF(2^8) modulo x^8 + x^4 + x^3 + x + 1.
constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  std::uint8_t r = 0;
  while (b) {
    if (b & 1) r ^= a;
    a = static_cast<std::uint8_t>((a << 1) ^ ((a & 0x80) ? 0x1b : 0));
    b >>= 1;
  }
  return r;
}

/// Multiplicative inverse (a^254); inverse of 0 is defined as 0.
constexpr std::uint8_t inv(std::uint8_t a) {
  std::uint8_t r = 1;
  std::uint8_t base = a;
  for (int e = 254; e; e >>= 1) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
  }
  return a ? r : 0;
}

/// S-box affine map: product with 0x1f modulo x^8 + 1, plus 0x63.
constexpr std::uint8_t affine(std::uint8_t b) {
  std::uint8_t r = 0;
  for (int i = 0; i < 5; ++i) r ^= static_cast<std::uint8_t>((b << i) | (b >> (8 - i)));
  return r ^ 0x63;
}

}  // namespace gf256
}  // namespace gridsec::crypto
