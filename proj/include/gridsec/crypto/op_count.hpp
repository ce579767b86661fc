#pragma once

#include <cstdint>
#include <ostream>

namespace gridsec::crypto {

/// Tallies of the primitive operation classes used for cost accounting.
/// Additions, loads and table lookups are deliberately not represented.
struct OpCount {
  std::uint64_t xor32 = 0;    // XOR on 32-bit words
  std::uint64_t shift32 = 0;  // shift on 32-bit words (a rotate is two)
  std::uint64_t gf8_mul = 0;  // multiplication in GF(2^8)
  std::uint64_t mul8 = 0;     // multiplication of 8-bit words
  std::uint64_t gf8_inv = 0;  // multiplicative inverse in GF(2^8)

  OpCount& operator+=(const OpCount& o) {
    xor32 += o.xor32;
    shift32 += o.shift32;
    gf8_mul += o.gf8_mul;
    mul8 += o.mul8;
    gf8_inv += o.gf8_inv;
    return *this;
  }

  friend OpCount operator+(OpCount a, const OpCount& b) { return a += b; }
  friend bool operator==(const OpCount&, const OpCount&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const OpCount& c) {
  return os << "{xor32:" << c.xor32 << ", shift32:" << c.shift32 << ", gf8_mul:" << c.gf8_mul
            << ", mul8:" << c.mul8 << ", gf8_inv:" << c.gf8_inv << "}";
}

namespace detail {

// Counting policies. The uninstrumented policy compiles away entirely.
struct NoTally {
  void xor32(std::uint64_t = 1) {}
  void shift32(std::uint64_t = 1) {}
  void gf8_mul(std::uint64_t = 1) {}
  void mul8(std::uint64_t = 1) {}
  void gf8_inv(std::uint64_t = 1) {}
};

struct Tally {
  OpCount& c;
  void xor32(std::uint64_t n = 1) { c.xor32 += n; }
  void shift32(std::uint64_t n = 1) { c.shift32 += n; }
  void gf8_mul(std::uint64_t n = 1) { c.gf8_mul += n; }
  void mul8(std::uint64_t n = 1) { c.mul8 += n; }
  void gf8_inv(std::uint64_t n = 1) { c.gf8_inv += n; }
};

}  // namespace detail
}  // namespace gridsec::crypto
