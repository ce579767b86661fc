#pragma once

#include <initializer_list>

#include "gridsec/bytes.hpp"
#include "gridsec/crypto/sha1.hpp"

namespace gridsec::crypto {

/// Shared secret used for packet authentication: 1 to 64 bytes.
class MacKey {
 public:
  static constexpr std::size_t kMaxBytes = 64;

  /// Throws SizeError when empty or longer than 64 bytes.
  explicit MacKey(Bytes bytes);

  ByteView bytes() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }

  friend bool operator==(const MacKey&, const MacKey&) = default;

 private:
  Bytes bytes_;
};

/// HMAC-SHA1 (RFC 2104) with the key pads absorbed once at construction.
///
/// Keys longer than the SHA-1 block are hashed first, as RFC 2104 requires;
/// any non-empty key is accepted here, MacKey bounds are a channel concern.
class HmacSha1 {
 public:
  explicit HmacSha1(ByteView key);
  HmacSha1(ByteView key, OpCount& ops);
  explicit HmacSha1(const MacKey& key) : HmacSha1(key.bytes()) {}

  /// MAC over the concatenation of `parts`.
  Digest160 mac(std::initializer_list<ByteView> parts) const;
  Digest160 mac(ByteView message) const { return mac({message}); }

  /// Same digest, with every compression tallied into `ops` (the key-pad
  /// setup cost is charged to the constructor's tally).
  Digest160 mac(std::initializer_list<ByteView> parts, OpCount& ops) const;

 private:
  void init(ByteView key, OpCount* ops);

  Sha1 inner_;
  Sha1 outer_;
};

/// One-shot HMAC-SHA1. Throws SizeError for an empty key.
Digest160 hmac_sha1(ByteView key, ByteView message);
Digest160 hmac_sha1(ByteView key, ByteView message, OpCount& ops);

}  // namespace gridsec::crypto
