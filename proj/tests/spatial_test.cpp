#include <gtest/gtest.h>

#include "gridsec/errors.hpp"
#include "gridsec/keyx/spatial.hpp"

using namespace gridsec;
using namespace gridsec::keyx;

namespace {

// Every subset of {0..n-1} as a bit mask.
std::vector<std::vector<std::size_t>> subsets(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i)
      if (m & (1u << i)) s.push_back(i);
    out.push_back(s);
  }
  return out;
}

std::vector<ShareBundle> pick(const std::vector<ShareBundle>& all, const std::vector<std::size_t>& idx) {
  std::vector<ShareBundle> out;
  for (auto i : idx) out.push_back(all[i]);
  return out;
}

}  // namespace

TEST(ThresholdPolicy, Validation) {
  EXPECT_THROW((ThresholdPolicy{0, 3, 31}.validate()), InvalidParameter);
  EXPECT_THROW((ThresholdPolicy{4, 3, 31}.validate()), InvalidParameter);
  EXPECT_THROW((ThresholdPolicy{2, 3, 32}.validate()), InvalidParameter);
  EXPECT_THROW((ThresholdPolicy{2, 13, 13}.validate()), InvalidParameter);
  EXPECT_NO_THROW((ThresholdPolicy{2, 12, 13}.validate()));
  EXPECT_NO_THROW((ThresholdPolicy{}.validate()));
}

TEST(ThresholdPolicy, ChunkWidthKeepsValuesBelowQ) {
  EXPECT_EQ((ThresholdPolicy{2, 3, 13}.chunk_bits()), 3u);
  EXPECT_EQ((ThresholdPolicy{2, 3, 31}.chunk_bits()), 4u);
  EXPECT_EQ((ThresholdPolicy{2, 2, 3}.chunk_bits()), 1u);
  EXPECT_EQ((ThresholdPolicy{}.chunk_bits()), 60u);
  for (std::uint64_t q : std::initializer_list<std::uint64_t>{3, 5, 13, 31, 101, 65537, kDefaultPrime}) {
    ThresholdPolicy p{1, 1, q};
    EXPECT_LT((std::uint64_t{1} << p.chunk_bits()) - 1, q);
  }
}

TEST(ShareValue, HandEvaluatedPolynomial) {
  // f(x) = 7 + 3x mod 31
  ThresholdPolicy p{2, 3, 31};
  const std::uint64_t a1[] = {3};
  auto shares = share_value(7, a1, p);
  ASSERT_EQ(shares.size(), 3u);
  EXPECT_EQ(shares[0], (Share{0, 1, 10}));
  EXPECT_EQ(shares[1], (Share{0, 2, 13}));
  EXPECT_EQ(shares[2], (Share{0, 3, 16}));
}

TEST(ReconstructValue, HandLagrange) {
  ThresholdPolicy p{2, 3, 31};
  const Share s[] = {{0, 1, 10}, {0, 3, 16}};
  EXPECT_EQ(reconstruct_value(s, p), 7u);
}

TEST(ReconstructValue, Errors) {
  ThresholdPolicy p{2, 3, 31};
  const Share one[] = {{0, 1, 10}};
  EXPECT_THROW(reconstruct_value(one, p), InsufficientShares);
  const Share dup[] = {{0, 1, 10}, {0, 1, 10}};
  EXPECT_THROW(reconstruct_value(dup, p), MalformedInput);
  const Share zero[] = {{0, 0, 7}, {0, 1, 10}};
  EXPECT_THROW(reconstruct_value(zero, p), MalformedInput);
}

TEST(Split, ThresholdOneMeansEveryBundleIsTheKey) {
  Rng rng(1);
  auto key = SecretKey::random(128, rng);
  ThresholdPolicy p{1, 4, kDefaultPrime};
  auto bundles = split(key, p, rng);
  for (const auto& b : bundles) {
    EXPECT_EQ(reconstruct(std::vector<ShareBundle>{b}, p, 128), key);
  }
}

TEST(Split, RejectsShortKeys) {
  Rng rng(2);
  EXPECT_THROW(split(SecretKey::random(15, rng), ThresholdPolicy{}, rng), SizeError);
}

TEST(Split, RoundtripRandomized) {
  Rng rng(3);
  const std::uint64_t primes[] = {13, 31, 101, 65537, 2147483647, kDefaultPrime};
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.below(8);
    const std::size_t t = 1 + rng.below(n);
    std::uint64_t q = primes[rng.below(6)];
    if (q <= n) q = 101;
    ThresholdPolicy p{t, n, q};
    const std::size_t bits = 16 + rng.below(300);
    auto key = SecretKey::random(bits, rng);
    auto bundles = split(key, p, rng);
    // Random subset of size >= t.
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = n; i > 1; --i) std::swap(idx[i - 1], idx[rng.below(i)]);
    idx.resize(t + rng.below(n - t + 1));
    ASSERT_EQ(reconstruct(pick(bundles, idx), p, bits), key);
  }
}

TEST(Split, EverySufficientSubsetReconstructs) {
  Rng rng(4);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (std::size_t t = 1; t <= n; ++t) {
      ThresholdPolicy p{t, n, 31};
      auto key = SecretKey::random(40, rng);
      auto bundles = split(key, p, rng);
      for (const auto& s : subsets(n)) {
        auto chosen = pick(bundles, s);
        if (s.size() >= t) {
          EXPECT_EQ(reconstruct(chosen, p, 40), key);
        } else {
          EXPECT_THROW(reconstruct(chosen, p, 40), InsufficientShares);
        }
      }
    }
  }
}

TEST(Split, ExactlyTAndTPlusOneAgree) {
  Rng rng(5);
  ThresholdPolicy p{3, 5, kDefaultPrime};
  auto key = SecretKey::random(256, rng);
  auto b = split(key, p, rng);
  EXPECT_EQ(reconstruct(pick(b, {0, 2, 4}), p, 256), reconstruct(pick(b, {0, 1, 2, 4}), p, 256));
}

TEST(Split, DeterministicPerSeed) {
  Rng rng(6);
  auto key = SecretKey::random(128, rng);
  ThresholdPolicy p{2, 4, kDefaultPrime};
  EXPECT_EQ(split(key, p, std::uint64_t{42}), split(key, p, std::uint64_t{42}));
  EXPECT_NE(split(key, p, std::uint64_t{42}), split(key, p, std::uint64_t{43}));
}

TEST(Bundle, WireLayout) {
  ShareBundle b{{1, 2, 3}};
  Bytes w = encode_bundle(b);
  const Bytes expected{0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0, 3};
  EXPECT_EQ(w, expected);
  EXPECT_EQ(decode_bundle(w), b);
  w.pop_back();
  EXPECT_THROW(decode_bundle(w), MalformedInput);
}

TEST(Bundle, RoundtripProperty) {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    auto bundles = split(SecretKey::random(16 + rng.below(1000), rng), ThresholdPolicy{2, 3, kDefaultPrime}, rng);
    for (const auto& b : bundles) EXPECT_EQ(decode_bundle(encode_bundle(b)), b);
  }
}

TEST(SecrecyAudit, TwoOfThreeThresholdAtQ13) {
  Rng rng(8);
  ThresholdPolicy p{3, 5, 13};
  for (int trial = 0; trial < 20; ++trial) {
    auto key = SecretKey::random(16, rng);
    auto bundles = split(key, p, rng);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = i + 1; j < 5; ++j) {
        const Share obs[] = {bundles[i][0], bundles[j][0]};
        auto a = secrecy_audit(p, obs);
        EXPECT_TRUE(a.uniform);
        EXPECT_EQ(a.consistent_secrets, 13u);
        for (auto c : a.consistent) EXPECT_EQ(c, 1u);
      }
    }
  }
}

TEST(SecrecyAudit, ThresholdSharesPinTheSecret) {
  Rng rng(9);
  ThresholdPolicy p{3, 5, 13};
  auto key = SecretKey::random(16, rng);
  auto bundles = split(key, p, rng);
  const Share obs[] = {bundles[0][0], bundles[2][0], bundles[4][0]};
  auto a = secrecy_audit(p, obs);
  EXPECT_EQ(a.consistent_secrets, 1u);
  EXPECT_EQ(a.consistent[key.bits().read(0, 3)], 1u);
}

TEST(SecrecyAudit, ThresholdOneNoShares) {
  auto a = secrecy_audit(ThresholdPolicy{1, 3, 31}, {});
  EXPECT_TRUE(a.uniform);
  EXPECT_EQ(a.consistent_secrets, 31u);
}

TEST(SecrecyAudit, ChunksAreIndependent) {
  Rng rng(10);
  ThresholdPolicy p{2, 3, 31};
  auto key = SecretKey::random(64, rng);
  auto bundles = split(key, p, rng);
  // One share of every chunk leaves each chunk's posterior uniform.
  for (const auto& s : bundles[1]) {
    const Share obs[] = {s};
    EXPECT_TRUE(secrecy_audit(p, obs).uniform);
  }
}

TEST(SecrecyAudit, RejectsLargeFields) {
  EXPECT_THROW(secrecy_audit(ThresholdPolicy{2, 3, 103}, {}), InvalidParameter);
  const Share dup[] = {{0, 1, 1}, {0, 1, 2}};
  EXPECT_THROW(secrecy_audit(ThresholdPolicy{3, 3, 13}, dup), MalformedInput);
}
