#include "gridsec/keyx/spatial.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace gridsec::keyx {

namespace {

constexpr std::uint64_t kAuditMaxQ = 101;

std::size_t chunk_count(std::size_t key_bits, unsigned chunk_bits) {
  return (key_bits + chunk_bits - 1) / chunk_bits;
}

}  // namespace

void ThresholdPolicy::validate() const {
  if (t < 1 || t > n) throw InvalidParameter("threshold must satisfy 1 <= t <= n");
  if (q < 3) throw InvalidParameter("share field must have at least 3 elements");
  if (!is_prime(q)) throw InvalidParameter("share field modulus must be prime");
  if (q <= n) throw InvalidParameter("share field modulus must exceed n");
  if (q >= (std::uint64_t{1} << 63)) throw InvalidParameter("share field modulus must be below 2^63");
}

unsigned ThresholdPolicy::chunk_bits() const {
  // ceil(log2 q) for q not a power of two (q is an odd prime here).
  return static_cast<unsigned>(std::bit_width(q - 1)) - 1;
}

std::vector<Share> share_value(std::uint64_t value, std::span<const std::uint64_t> higher_coeffs,
                               const ThresholdPolicy& policy, std::uint32_t chunk_index) {
  policy.validate();
  if (higher_coeffs.size() != policy.t - 1) throw InvalidParameter("need exactly t-1 higher coefficients");
  PrimeField f(policy.q);
  std::vector<std::uint64_t> coeffs{value};
  coeffs.insert(coeffs.end(), higher_coeffs.begin(), higher_coeffs.end());
  if (std::any_of(coeffs.begin(), coeffs.end(), [&](auto c) { return c >= policy.q; })) {
    throw InvalidParameter("coefficients must be field elements");
  }
  std::vector<Share> out;
  for (std::uint64_t x = 1; x <= policy.n; ++x) out.push_back({chunk_index, x, poly::evaluate(f, coeffs, x)});
  return out;
}

std::vector<ShareBundle> split(const SecretKey& key, const ThresholdPolicy& policy, Rng& rng) {
  policy.validate();
  if (key.bit_length() < kMinKeyBits) throw SizeError("threshold-shared keys must be at least 16 bits");
  const unsigned cb = policy.chunk_bits();
  const std::size_t chunks = chunk_count(key.bit_length(), cb);

  std::vector<ShareBundle> bundles(policy.n);
  std::vector<std::uint64_t> higher(policy.t - 1);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t start = c * cb;
    const std::size_t width = std::min<std::size_t>(cb, key.bit_length() - start);
    const std::uint64_t value = key.bits().read(start, width);
    for (auto& a : higher) a = rng.below(policy.q);
    auto shares = share_value(value, higher, policy, static_cast<std::uint32_t>(c));
    for (std::size_t i = 0; i < policy.n; ++i) bundles[i].push_back(shares[i]);
  }
  return bundles;
}

std::vector<ShareBundle> split(const SecretKey& key, const ThresholdPolicy& policy, std::uint64_t seed) {
  Rng rng(seed);
  return split(key, policy, rng);
}

std::uint64_t reconstruct_value(std::span<const Share> shares, const ThresholdPolicy& policy) {
  policy.validate();
  if (shares.size() < policy.t) throw InsufficientShares("fewer than t shares for a chunk");
  std::vector<std::uint64_t> xs, ys;
  for (const auto& s : shares) {
    if (s.x == 0 || s.x >= policy.q || s.y >= policy.q) throw MalformedInput("share outside the field");
    xs.push_back(s.x);
    ys.push_back(s.y);
  }
  return poly::interpolate_at_zero(PrimeField(policy.q), xs, ys);
}

SecretKey reconstruct(std::span<const Share> shares, const ThresholdPolicy& policy, std::size_t key_bits) {
  policy.validate();
  if (key_bits < kMinKeyBits || key_bits > SecretKey::kMaxBits) throw SizeError("key length out of range");
  const unsigned cb = policy.chunk_bits();
  const std::size_t chunks = chunk_count(key_bits, cb);

  std::map<std::uint32_t, std::vector<Share>> by_chunk;
  for (const auto& s : shares) {
    if (s.chunk_index >= chunks) throw MalformedInput("share for a chunk beyond the key length");
    by_chunk[s.chunk_index].push_back(s);
  }

  BitString bits;
  for (std::uint32_t c = 0; c < chunks; ++c) {
    auto it = by_chunk.find(c);
    if (it == by_chunk.end()) throw InsufficientShares("no shares for a key chunk");
    const std::uint64_t value = reconstruct_value(it->second, policy);
    const std::size_t width = std::min<std::size_t>(cb, key_bits - c * cb);
    if (width < 64 && (value >> width) != 0) throw MalformedInput("reconstructed chunk exceeds its width");
    bits.append(value, width);
  }
  return SecretKey(std::move(bits));
}

SecretKey reconstruct(std::span<const ShareBundle> bundles, const ThresholdPolicy& policy, std::size_t key_bits) {
  std::vector<Share> all;
  for (const auto& b : bundles) all.insert(all.end(), b.begin(), b.end());
  return reconstruct(all, policy, key_bits);
}

Bytes encode_bundle(const ShareBundle& bundle) {
  Bytes out;
  out.reserve(4 + bundle.size() * 20);
  put_be32(out, static_cast<std::uint32_t>(bundle.size()));
  for (const auto& s : bundle) {
    put_be32(out, s.chunk_index);
    put_be64(out, s.x);
    put_be64(out, s.y);
  }
  return out;
}

ShareBundle decode_bundle(ByteView data) {
  ByteReader in(data);
  const std::uint32_t count = in.be32();
  if (in.remaining() != std::uint64_t{count} * 20) throw MalformedInput("share bundle length mismatch");
  ShareBundle b;
  b.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Share s;
    s.chunk_index = in.be32();
    s.x = in.be64();
    s.y = in.be64();
    b.push_back(s);
  }
  return b;
}

SecrecyAudit secrecy_audit(const ThresholdPolicy& policy, std::span<const Share> observed) {
  policy.validate();
  if (policy.q > kAuditMaxQ) throw InvalidParameter("secrecy audit needs q <= 101");
  std::set<std::uint64_t> xs;
  for (const auto& s : observed) {
    if (s.x == 0 || s.x >= policy.q || s.y >= policy.q) throw MalformedInput("share outside the field");
    if (!xs.insert(s.x).second) throw MalformedInput("duplicate share x");
    if (s.chunk_index != observed.front().chunk_index) throw MalformedInput("audit shares must share a chunk");
  }

  const std::uint64_t q = policy.q;
  const std::size_t t = policy.t;
  SecrecyAudit r;
  r.q = q;
  r.t = t;
  r.observed = observed.size();
  r.consistent.assign(q, 0);

  // Odometer over (a_0, ..., a_{t-1}); products stay far below 2^64.
  std::vector<std::uint64_t> a(t, 0);
  while (true) {
    bool ok = true;
    for (const auto& s : observed) {
      std::uint64_t acc = 0;
      for (std::size_t k = t; k-- > 0;) acc = (acc * s.x + a[k]) % q;
      if (acc != s.y) {
        ok = false;
        break;
      }
    }
    if (ok) ++r.consistent[a[0]];

    std::size_t k = 0;
    while (k < t && ++a[k] == q) a[k++] = 0;
    if (k == t) break;
  }

  r.consistent_secrets = static_cast<std::size_t>(
      std::count_if(r.consistent.begin(), r.consistent.end(), [](auto c) { return c > 0; }));
  r.uniform = std::all_of(r.consistent.begin(), r.consistent.end(),
                          [&](auto c) { return c == r.consistent.front(); });
  return r;
}

}  // namespace gridsec::keyx
