#include "gridsec/secret_key.hpp"

#include <algorithm>
#include <cctype>

#include "gridsec/errors.hpp"

namespace gridsec {

void BitString::push_back(bool bit) {
  if (size_ % 8 == 0) bytes_.push_back(0);
  if (bit) bytes_.back() |= static_cast<std::uint8_t>(0x80u >> (size_ % 8));
  ++size_;
}

void BitString::append(std::uint64_t value, std::size_t count) {
  for (std::size_t i = count; i-- > 0;) push_back((value >> i) & 1);
}

void BitString::append(const BitString& other) {
  for (std::size_t i = 0; i < other.size(); ++i) push_back(other[i]);
}

std::uint64_t BitString::read(std::size_t start, std::size_t count) const {
  if (count > 64 || start + count > size_) throw SizeError("bit read out of range");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < count; ++i) v = (v << 1) | (*this)[start + i];
  return v;
}

BitString BitString::slice(std::size_t start, std::size_t count) const {
  if (start + count > size_) throw SizeError("bit slice out of range");
  BitString out;
  for (std::size_t i = 0; i < count; ++i) out.push_back((*this)[start + i]);
  return out;
}

std::string BitString::to_bit_string() const {
  std::string s;
  s.reserve(size_);
  for (std::size_t i = 0; i < size_; ++i) s.push_back((*this)[i] ? '1' : '0');
  return s;
}

SecretKey::SecretKey(BitString bits) : bits_(std::move(bits)) {
  if (bits_.empty() || bits_.size() > kMaxBits) throw SizeError("key length must be 1 to 4096 bits");
}

SecretKey SecretKey::from_hex(std::string_view hex, std::optional<std::size_t> bits) {
  std::string text(hex);
  text.erase(std::remove_if(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }), text.end());
  if (text.size() >= 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) text.erase(0, 2);
  // An odd digit count is fine when the stated length fits in those digits.
  if (text.size() % 2 != 0 && bits && *bits <= 4 * text.size()) text.push_back('0');
  Bytes raw = gridsec::from_hex(text);
  std::size_t n = bits.value_or(raw.size() * 8);
  if (n > raw.size() * 8) throw SizeError("hex key is shorter than the stated bit length");
  if ((n + 7) / 8 != raw.size()) throw SizeError("hex key is longer than the stated bit length");
  BitString b;
  for (std::size_t i = 0; i < n; ++i) b.push_back((raw[i / 8] >> (7 - i % 8)) & 1);
  return SecretKey(std::move(b));
}

SecretKey SecretKey::from_bit_string(std::string_view text) {
  BitString b;
  for (char c : text) {
    if (c != '0' && c != '1') throw MalformedInput("bit string may only contain 0 and 1");
    b.push_back(c == '1');
  }
  return SecretKey(std::move(b));
}

SecretKey SecretKey::random(std::size_t bits, Rng& rng) {
  BitString b;
  while (b.size() < bits) {
    std::uint64_t w = rng.next();
    std::size_t take = std::min<std::size_t>(64, bits - b.size());
    b.append(w >> (64 - take), take);
  }
  return SecretKey(std::move(b));
}

std::string SecretKey::to_hex() const { return gridsec::to_hex(bits_.bytes()); }

}  // namespace gridsec
