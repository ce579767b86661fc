#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace gridsec {

__extension__ using uint128 = unsigned __int128;

/// 2^61 - 1, the default modulus for both key-exchange schemes.
inline constexpr std::uint64_t kDefaultPrime = (std::uint64_t{1} << 61) - 1;

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t n);

/// Arithmetic in Z/pZ for a prime p < 2^63.
class PrimeField {
 public:
  /// Throws InvalidParameter when p is not prime or is >= 2^63.
  explicit PrimeField(std::uint64_t p);

  std::uint64_t modulus() const { return p_; }

  std::uint64_t reduce(std::uint64_t a) const { return a % p_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + p_ - b; }
  std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    return static_cast<std::uint64_t>(static_cast<uint128>(a) * b % p_);
  }
  std::uint64_t pow(std::uint64_t base, std::uint64_t exp) const;
  /// Inverse of a non-zero element; throws InvalidParameter for zero.
  std::uint64_t inv(std::uint64_t a) const;

 private:
  std::uint64_t p_;
};

/// Polynomials are coefficient vectors in ascending degree order.
namespace poly {

std::uint64_t evaluate(const PrimeField& f, std::span<const std::uint64_t> coeffs, std::uint64_t x);

/// Monic product of (x - r) over the given roots.
std::vector<std::uint64_t> from_roots(const PrimeField& f, std::span<const std::uint64_t> roots);

/// Value at x = 0 of the unique polynomial of degree < n through the n
/// points. Throws MalformedInput on duplicate x.
std::uint64_t interpolate_at_zero(const PrimeField& f, std::span<const std::uint64_t> xs,
                                  std::span<const std::uint64_t> ys);

/// Full coefficients (length n) of the interpolating polynomial.
std::vector<std::uint64_t> interpolate(const PrimeField& f, std::span<const std::uint64_t> xs,
                                       std::span<const std::uint64_t> ys);

}  // namespace poly
}  // namespace gridsec
