#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "gridsec/bytes.hpp"
#include "gridsec/rng.hpp"

namespace gridsec {

/// Growable bit string, most significant bit first within each byte.
class BitString {
 public:
  BitString() = default;

  void push_back(bool bit);
  /// Appends the low `count` bits of `value`, most significant first.
  void append(std::uint64_t value, std::size_t count);
  void append(const BitString& other);

  bool operator[](std::size_t i) const { return (bytes_[i / 8] >> (7 - i % 8)) & 1; }
  /// Reads `count` (<= 64) bits starting at `start` as an unsigned value.
  std::uint64_t read(std::size_t start, std::size_t count) const;
  BitString slice(std::size_t start, std::size_t count) const;

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  /// Packed bytes; bits past size() are zero.
  ByteView bytes() const { return bytes_; }

  std::string to_bit_string() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  Bytes bytes_;
  std::size_t size_ = 0;
};

/// The shared key K as an explicit bit string of 1..4096 bits.
///
/// Scheme-specific lower bounds (16 bits for threshold sharing) are checked
/// by the schemes themselves.
class SecretKey {
 public:
  static constexpr std::size_t kMaxBits = 4096;

  /// Throws SizeError when the length is outside 1..4096.
  explicit SecretKey(BitString bits);

  /// `bits` defaults to 4 * hex length. With an explicit length the leading
  /// `bits` bits of the hex value are kept; the hex may not carry whole
  /// surplus bytes, and an odd digit count is accepted when it covers `bits`.
  static SecretKey from_hex(std::string_view hex, std::optional<std::size_t> bits = std::nullopt);
  /// Parses a string of '0'/'1' characters.
  static SecretKey from_bit_string(std::string_view text);
  static SecretKey random(std::size_t bits, Rng& rng);

  const BitString& bits() const { return bits_; }
  std::size_t bit_length() const { return bits_.size(); }
  /// Hex of the packed bytes; a partial final byte is zero-padded.
  std::string to_hex() const;
  ByteView bytes() const { return bits_.bytes(); }

  friend bool operator==(const SecretKey&, const SecretKey&) = default;

 private:
  BitString bits_;
};

}  // namespace gridsec
