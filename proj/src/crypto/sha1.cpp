#include "gridsec/crypto/sha1.hpp"

#include <cstring>

#include "gridsec/errors.hpp"

namespace gridsec::crypto {

namespace {

template <class T>
inline std::uint32_t rotl(std::uint32_t x, int n, T& t) {
  t.shift32(2);
  return (x << n) | (x >> (32 - n));
}

template <class T>
void compress_block(std::array<std::uint32_t, 5>& h, const std::uint8_t* p, T& t) {
  std::uint32_t w[80];
  for (int i = 0; i < 16; ++i) {
    w[i] = (std::uint32_t{p[4 * i]} << 24) | (std::uint32_t{p[4 * i + 1]} << 16) |
           (std::uint32_t{p[4 * i + 2]} << 8) | std::uint32_t{p[4 * i + 3]};
  }
  for (int i = 16; i < 80; ++i) {
    t.xor32(3);
    w[i] = rotl(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1, t);
  }

  std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
  for (int i = 0; i < 80; ++i) {
    std::uint32_t f, k;
    if (i < 20) {
      f = d ^ (b & (c ^ d));
      t.xor32(2);
      k = 0x5A827999u;
    } else if (i < 40) {
      f = b ^ c ^ d;
      t.xor32(2);
      k = 0x6ED9EBA1u;
    } else if (i < 60) {
      f = (b & c) | (b & d) | (c & d);
      k = 0x8F1BBCDCu;
    } else {
      f = b ^ c ^ d;
      t.xor32(2);
      k = 0xCA62C1D6u;
    }
    std::uint32_t tmp = rotl(a, 5, t) + f + e + k + w[i];
    e = d;
    d = c;
    c = rotl(b, 30, t);
    b = a;
    a = tmp;
  }
  h[0] += a;
  h[1] += b;
  h[2] += c;
  h[3] += d;
  h[4] += e;
}

}  // namespace

void Sha1::compress(const std::uint8_t* block) {
  if (ops_) {
    detail::Tally t{*ops_};
    compress_block(h_, block, t);
  } else {
    detail::NoTally t;
    compress_block(h_, block, t);
  }
}

void Sha1::update(ByteView data) {
  if (data.size() > kMaxMessageBytes - total_) {
    throw SizeError("SHA-1 input must be shorter than 2^64 bits");
  }
  total_ += data.size();

  const std::uint8_t* p = data.data();
  std::size_t n = data.size();
  if (buf_len_ > 0) {
    std::size_t take = std::min(n, kBlockBytes - buf_len_);
    std::memcpy(buf_.data() + buf_len_, p, take);
    buf_len_ += take;
    p += take;
    n -= take;
    if (buf_len_ < kBlockBytes) return;
    compress(buf_.data());
    buf_len_ = 0;
  }
  for (; n >= kBlockBytes; n -= kBlockBytes, p += kBlockBytes) compress(p);
  if (n > 0) {
    std::memcpy(buf_.data(), p, n);
    buf_len_ = n;
  }
}

Digest160 Sha1::finish() {
  const std::uint64_t bit_len = total_ * 8;
  buf_[buf_len_++] = 0x80;
  if (buf_len_ > kBlockBytes - 8) {
    std::memset(buf_.data() + buf_len_, 0, kBlockBytes - buf_len_);
    compress(buf_.data());
    buf_len_ = 0;
  }
  std::memset(buf_.data() + buf_len_, 0, kBlockBytes - 8 - buf_len_);
  for (int i = 0; i < 8; ++i) buf_[kBlockBytes - 1 - i] = static_cast<std::uint8_t>(bit_len >> (8 * i));
  compress(buf_.data());
  buf_len_ = 0;

  Digest160 out;
  for (int i = 0; i < 5; ++i) {
    out[4 * i] = static_cast<std::uint8_t>(h_[i] >> 24);
    out[4 * i + 1] = static_cast<std::uint8_t>(h_[i] >> 16);
    out[4 * i + 2] = static_cast<std::uint8_t>(h_[i] >> 8);
    out[4 * i + 3] = static_cast<std::uint8_t>(h_[i]);
  }
  return out;
}

Digest160 sha1(ByteView message) {
  Sha1 s;
  s.update(message);
  return s.finish();
}

Digest160 sha1(ByteView message, OpCount& ops) {
  Sha1 s(ops);
  s.update(message);
  return s.finish();
}

}  // namespace gridsec::crypto
