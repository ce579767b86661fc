#include "gridsec/cost_model.hpp"

#include <cmath>

#include "gridsec/errors.hpp"

namespace gridsec::cost {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw SizeError("operation count overflows 64 bits");
  return r;
}

}  // namespace

const char* scheme_name(Scheme scheme) { return scheme == Scheme::kHmacSha1 ? "hmac-sha1" : "aes-128"; }

crypto::OpCount unit_cost(Scheme scheme) {
  if (scheme == Scheme::kHmacSha1) {
    return crypto::OpCount{.xor32 = 762, .shift32 = 132, .gf8_mul = 0, .mul8 = 0, .gf8_inv = 0};
  }
  return crypto::OpCount{.xor32 = 1214, .shift32 = 132, .gf8_mul = 320, .mul8 = 44, .gf8_inv = 68};
}

CostReport analytic_cost(Scheme scheme, std::uint64_t message_bits) {
  if (message_bits == 0) throw InvalidParameter("message must be at least one bit");
  const std::uint64_t units = message_bits / kUnitBits + (message_bits % kUnitBits != 0);
  const auto u = unit_cost(scheme);
  CostReport r;
  r.scheme = scheme;
  r.message_bits = message_bits;
  r.blocks = units;
  r.ops = crypto::OpCount{.xor32 = checked_mul(u.xor32, units),
                          .shift32 = checked_mul(u.shift32, units),
                          .gf8_mul = checked_mul(u.gf8_mul, units),
                          .mul8 = checked_mul(u.mul8, units),
                          .gf8_inv = checked_mul(u.gf8_inv, units)};
  return r;
}

CostReport analytic_cost_bytes(Scheme scheme, std::uint64_t message_bytes) {
  constexpr std::uint64_t kMaxSha1Bytes = (std::uint64_t{1} << 61) - 1;
  if (scheme == Scheme::kHmacSha1 && message_bytes > kMaxSha1Bytes) {
    throw SizeError("HMAC-SHA1 messages must be shorter than 2^64 bits");
  }
  if (message_bytes > UINT64_MAX / 8) throw SizeError("message size not representable in bits");
  return analytic_cost(scheme, message_bytes * 8);
}

ChannelCost channel_cost(std::uint64_t wheat_blocks, double chaff_ratio) {
  if (!(chaff_ratio >= 0.0) || !std::isfinite(chaff_ratio)) {
    throw InvalidParameter("chaff ratio must be a finite non-negative number");
  }
  ChannelCost c;
  c.compute.scheme = Scheme::kHmacSha1;
  if (wheat_blocks > 0) c.compute = analytic_cost(Scheme::kHmacSha1, checked_mul(wheat_blocks, kUnitBits));
  c.transfer_blocks = static_cast<double>(wheat_blocks) * (1.0 + chaff_ratio);
  return c;
}

}  // namespace gridsec::cost
