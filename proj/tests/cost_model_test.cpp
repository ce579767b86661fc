#include <gtest/gtest.h>

#include "gridsec/bench.hpp"
#include "gridsec/cost_model.hpp"
#include "gridsec/errors.hpp"

using namespace gridsec;
using namespace gridsec::cost;
using crypto::OpCount;

TEST(AnalyticCost, HmacUnit) {
  auto r = analytic_cost(Scheme::kHmacSha1, 512);
  EXPECT_EQ(r.blocks, 1u);
  EXPECT_EQ(r.ops, (OpCount{.xor32 = 762, .shift32 = 132, .gf8_mul = 0, .mul8 = 0, .gf8_inv = 0}));
}

TEST(AnalyticCost, AesUnit) {
  auto r = analytic_cost(Scheme::kAes128, 512);
  EXPECT_EQ(r.ops, (OpCount{.xor32 = 1214, .shift32 = 132, .gf8_mul = 320, .mul8 = 44, .gf8_inv = 68}));
}

TEST(AnalyticCost, SubUnitMessagesArePadded) {
  EXPECT_EQ(analytic_cost(Scheme::kHmacSha1, 100).ops, analytic_cost(Scheme::kHmacSha1, 512).ops);
  EXPECT_EQ(analytic_cost(Scheme::kHmacSha1, 1).blocks, 1u);
  EXPECT_EQ(analytic_cost(Scheme::kHmacSha1, 513).blocks, 2u);
}

TEST(AnalyticCost, LinearInUnits) {
  for (auto s : {Scheme::kHmacSha1, Scheme::kAes128}) {
    const auto unit = analytic_cost(s, 512).ops;
    for (std::uint64_t k = 1; k <= 64; ++k) {
      const auto r = analytic_cost(s, k * 512);
      EXPECT_EQ(r.blocks, k);
      EXPECT_EQ(r.ops.xor32, k * unit.xor32);
      EXPECT_EQ(r.ops.shift32, k * unit.shift32);
      EXPECT_EQ(r.ops.gf8_mul, k * unit.gf8_mul);
      EXPECT_EQ(r.ops.mul8, k * unit.mul8);
      EXPECT_EQ(r.ops.gf8_inv, k * unit.gf8_inv);
    }
  }
}

TEST(AnalyticCost, AesXorsExceedHmacEverywhere) {
  for (std::uint64_t bits = 1; bits < 20000; bits += 37) {
    EXPECT_GT(analytic_cost(Scheme::kAes128, bits).ops.xor32, analytic_cost(Scheme::kHmacSha1, bits).ops.xor32);
  }
}

TEST(AnalyticCost, Errors) {
  EXPECT_THROW(analytic_cost(Scheme::kHmacSha1, 0), InvalidParameter);
  EXPECT_THROW(analytic_cost_bytes(Scheme::kHmacSha1, std::uint64_t{1} << 61), SizeError);
  EXPECT_EQ(analytic_cost_bytes(Scheme::kHmacSha1, std::uint64_t{1} << 40).blocks, std::uint64_t{1} << 34);
  EXPECT_THROW(analytic_cost(Scheme::kAes128, UINT64_MAX), SizeError);  // tally overflow
}

TEST(ChannelCost, ChaffDoublesVolumeNotCompute) {
  auto c = channel_cost(10, 1.0);
  EXPECT_DOUBLE_EQ(c.transfer_blocks, 20.0);
  EXPECT_EQ(c.compute.ops, analytic_cost(Scheme::kHmacSha1, 10 * 512).ops);
}

TEST(ChannelCost, ComputeInvariantUnderRatio) {
  for (double r : {0.0, 0.5, 1.0, 3.0, 10.0}) {
    EXPECT_EQ(channel_cost(7, r).compute.ops, channel_cost(7, 0.0).compute.ops);
  }
}

TEST(ChannelCost, EmptyChannel) {
  auto c = channel_cost(0, 2.5);
  EXPECT_EQ(c.compute.ops, OpCount{});
  EXPECT_DOUBLE_EQ(c.transfer_blocks, 0.0);
  EXPECT_THROW(channel_cost(1, -1.0), InvalidParameter);
}

TEST(WallclockBench, EmptyStream) {
  auto r = wallclock_bench(BenchConfig{.stream_bytes = 0});
  EXPECT_TRUE(r.empty);
}

TEST(WallclockBench, RejectsShortStreams) {
  EXPECT_THROW(wallclock_bench(BenchConfig{.stream_bytes = 1000}), InvalidParameter);
}

TEST(WallclockBench, RatioZeroSendsWheatOnly) {
  auto r = wallclock_bench(BenchConfig{.stream_bytes = 1 << 20, .chaff_ratio = 0.0, .trials = 1});
  EXPECT_FALSE(r.empty);
  // 1024 packets, each header + 1024 payload + MAC.
  EXPECT_EQ(r.wc_wire_bytes, 1024u * (10 + 1024 + 20));
  EXPECT_GT(r.wc_mbps, 0.0);
  EXPECT_GT(r.baseline_mbps, 0.0);
}

TEST(WallclockBench, RatioOneDoublesWire) {
  auto r = wallclock_bench(BenchConfig{.stream_bytes = 1 << 20, .chaff_ratio = 1.0, .trials = 1});
  EXPECT_EQ(r.wc_wire_bytes, 2u * 1024u * (10 + 1024 + 20));
}
