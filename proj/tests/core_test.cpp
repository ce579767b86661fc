#include <gtest/gtest.h>

#include "gridsec/bytes.hpp"
#include "gridsec/errors.hpp"
#include "gridsec/modarith.hpp"
#include "gridsec/rng.hpp"
#include "gridsec/secret_key.hpp"

using namespace gridsec;

TEST(Hex, Roundtrip) {
  EXPECT_EQ(to_hex(Bytes{0x00, 0xab, 0xff}), "00abff");
  EXPECT_EQ(from_hex(" 0x00ABff\n"), (Bytes{0x00, 0xab, 0xff}));
  EXPECT_TRUE(from_hex("").empty());
  EXPECT_THROW(from_hex("abc"), MalformedInput);
  EXPECT_THROW(from_hex("zz"), MalformedInput);
}

TEST(ByteReader, BigEndianAndBounds) {
  Bytes b;
  put_be16(b, 0x0102);
  put_be32(b, 0x03040506);
  put_be64(b, 0x0708090a0b0c0d0eull);
  ByteReader r(b);
  EXPECT_EQ(r.be16(), 0x0102);
  EXPECT_EQ(r.be32(), 0x03040506u);
  EXPECT_EQ(r.be64(), 0x0708090a0b0c0d0eull);
  EXPECT_TRUE(r.done());
  EXPECT_THROW(r.u8(), MalformedInput);
}

TEST(BitString, ReadAndSlice) {
  auto k = SecretKey::from_bit_string("10110010");
  EXPECT_EQ(k.bits().read(0, 3), 0b101u);
  EXPECT_EQ(k.bits().read(3, 2), 0b10u);
  EXPECT_EQ(k.bits().slice(5, 3).to_bit_string(), "010");
  EXPECT_EQ(k.to_hex(), "b2");
  BitString b;
  b.append(0b1, 1);
  b.append(k.bits());
  EXPECT_EQ(b.to_bit_string(), "110110010");
  EXPECT_EQ(to_hex(b.bytes()), "d900");
}

TEST(SecretKey, HexWithExplicitLength) {
  EXPECT_EQ(SecretKey::from_hex("b2").bit_length(), 8u);
  EXPECT_EQ(SecretKey::from_hex("b2", 3).bits().to_bit_string(), "101");
  EXPECT_EQ(SecretKey::from_hex("abc", 12).to_hex(), "abc0");
  EXPECT_EQ(SecretKey::from_hex("abc", 10).bits().to_bit_string(), "1010101111");
  EXPECT_THROW(SecretKey::from_hex("abc"), MalformedInput);
  EXPECT_THROW(SecretKey::from_hex("abc", 13), MalformedInput);
  EXPECT_THROW(SecretKey::from_hex("b2", 9), SizeError);
  EXPECT_THROW(SecretKey::from_hex("b2b2", 8), SizeError);
  EXPECT_THROW(SecretKey::from_hex(""), SizeError);
}

TEST(SecretKey, RandomIsSeeded) {
  Rng a(5), b(5);
  EXPECT_EQ(SecretKey::random(100, a), SecretKey::random(100, b));
  EXPECT_EQ(SecretKey::random(100, a).bit_length(), 100u);
}

TEST(Primes, MillerRabin) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(97));
  EXPECT_TRUE(is_prime(kDefaultPrime));
  EXPECT_TRUE(is_prime(18446744073709551557ull));  // largest 64-bit prime
  EXPECT_TRUE(is_prime(4611686018427387847ull));
  EXPECT_FALSE(is_prime(0));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(561));          // Carmichael
  EXPECT_FALSE(is_prime(3215031751ull)); // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_FALSE(is_prime((1ull << 61) + 1));
}

TEST(PrimeField, Arithmetic) {
  PrimeField f(97);
  EXPECT_EQ(f.inv(3), 65u);
  EXPECT_EQ(f.sub(2, 10), 89u);
  EXPECT_EQ(f.neg(0), 0u);
  EXPECT_EQ(f.pow(5, 96), 1u);
  PrimeField big(kDefaultPrime);
  EXPECT_EQ(big.mul(123456789, big.inv(123456789)), 1u);
  EXPECT_EQ(big.mul(kDefaultPrime - 1, kDefaultPrime - 1), 1u);
  EXPECT_THROW(PrimeField(96), InvalidParameter);
  EXPECT_THROW(f.inv(0), InvalidParameter);
}

TEST(Poly, RootsEvaluateAndInterpolate) {
  PrimeField f(97);
  const std::uint64_t roots[] = {3, 5};
  const auto p = poly::from_roots(f, roots);
  EXPECT_EQ(p, (std::vector<std::uint64_t>{15, 89, 1}));
  EXPECT_EQ(poly::evaluate(f, p, 1), 8u);
  EXPECT_EQ(poly::evaluate(f, p, 2), 3u);
  EXPECT_EQ(poly::evaluate(f, p, 4), 96u);
  const std::uint64_t xs[] = {1, 2, 4};
  const std::uint64_t ys[] = {8, 3, 96};
  EXPECT_EQ(poly::interpolate(f, xs, ys), p);
  EXPECT_EQ(poly::interpolate_at_zero(f, xs, ys), 15u);
  const std::uint64_t dup[] = {1, 1, 4};
  EXPECT_THROW(poly::interpolate(f, dup, ys), MalformedInput);
}

TEST(Poly, InterpolationInvertsEvaluation) {
  Rng rng(7);
  PrimeField f(kDefaultPrime);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(10);
    std::vector<std::uint64_t> c(n), xs(n), ys(n);
    for (auto& v : c) v = rng.below(kDefaultPrime);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = i + 1 + rng.below(1000) * 16;
      ys[i] = poly::evaluate(f, c, xs[i]);
    }
    ASSERT_EQ(poly::interpolate(f, xs, ys), c);
    ASSERT_EQ(poly::interpolate_at_zero(f, xs, ys), c[0]);
  }
}

TEST(Rng, DerivedStreamsDiffer) {
  auto a = Rng::derive(1, 1);
  auto b = Rng::derive(1, 2);
  auto c = Rng::derive(1, 1);
  const auto x = a.next();
  EXPECT_NE(x, b.next());
  EXPECT_EQ(x, c.next());
  Rng r(3);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(r.below(7), 7u);
    const auto v = r.between(10, 12);
    EXPECT_TRUE(v >= 10 && v <= 12);
  }
}
