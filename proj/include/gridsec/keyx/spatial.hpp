#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gridsec/bytes.hpp"
#include "gridsec/errors.hpp"
#include "gridsec/modarith.hpp"
#include "gridsec/rng.hpp"
#include "gridsec/secret_key.hpp"

namespace gridsec::keyx {

/// Fewer than t shares were supplied for some chunk.
class InsufficientShares : public Error {
 public:
  using Error::Error;
};

/// A (t, n)-threshold policy over the prime field of order q.
struct ThresholdPolicy {
  std::size_t t = 2;
  std::size_t n = 3;
  std::uint64_t q = kDefaultPrime;

  /// Throws InvalidParameter unless 1 <= t <= n, q is prime, q > n and
  /// q >= 3 (so a chunk holds at least one bit).
  void validate() const;

  /// Key bits per field element: ceil(log2 q) - 1, so every chunk value is
  /// below q.
  unsigned chunk_bits() const;
};

/// One evaluation (x, f(x)) of the polynomial for key chunk `chunk_index`.
struct Share {
  std::uint32_t chunk_index = 0;
  std::uint64_t x = 0;
  std::uint64_t y = 0;

  friend bool operator==(const Share&, const Share&) = default;
};

/// Everything sent down one path: one share per chunk, all at the same x.
using ShareBundle = std::vector<Share>;

inline constexpr std::size_t kMinKeyBits = 16;

/// Splits `key` into n bundles; bundle i carries the shares at x = i + 1.
/// Each chunk gets an independent polynomial of degree t - 1 with the chunk
/// value as constant term and uniformly random higher coefficients.
std::vector<ShareBundle> split(const SecretKey& key, const ThresholdPolicy& policy, Rng& rng);
std::vector<ShareBundle> split(const SecretKey& key, const ThresholdPolicy& policy, std::uint64_t seed);

/// Shares of a single field value under explicit higher coefficients
/// (a_1 .. a_{t-1}), evaluated at x = 1..n.
std::vector<Share> share_value(std::uint64_t value, std::span<const std::uint64_t> higher_coeffs,
                               const ThresholdPolicy& policy, std::uint32_t chunk_index = 0);

/// Lagrange interpolation at x = 0 over every supplied share of one chunk.
/// Throws InsufficientShares below t shares, MalformedInput on duplicate or
/// zero x.
std::uint64_t reconstruct_value(std::span<const Share> shares, const ThresholdPolicy& policy);

/// Reassembles a `key_bits`-bit key from shares of every chunk (any order).
SecretKey reconstruct(std::span<const Share> shares, const ThresholdPolicy& policy, std::size_t key_bits);
SecretKey reconstruct(std::span<const ShareBundle> bundles, const ThresholdPolicy& policy, std::size_t key_bits);

/// chunk_count(4) | per chunk: chunk_index(4) | x(8) | y(8), big-endian.
Bytes encode_bundle(const ShareBundle& bundle);
ShareBundle decode_bundle(ByteView data);

/// Exhaustive consistency count for a set of observed shares of one chunk.
struct SecrecyAudit {
  std::uint64_t q = 0;
  std::size_t t = 0;
  std::size_t observed = 0;
  /// consistent[s] = number of polynomials of degree <= t-1 with a_0 = s
  /// that agree with every observed share.
  std::vector<std::uint64_t> consistent;
  /// Candidate secrets with at least one consistent polynomial.
  std::size_t consistent_secrets = 0;
  /// Every candidate admits the same number of polynomials.
  bool uniform = false;
};

/// Brute force over all q^t polynomials. Requires q <= 101; throws
/// InvalidParameter otherwise.
SecrecyAudit secrecy_audit(const ThresholdPolicy& policy, std::span<const Share> observed);

}  // namespace gridsec::keyx
