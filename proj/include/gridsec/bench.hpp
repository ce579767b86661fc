#pragma once

#include <cstdint>

namespace gridsec::cost {

struct BenchConfig {
  std::uint64_t stream_bytes = 64ull << 20;
  double chaff_ratio = 1.0;
  unsigned trials = 5;
  std::size_t chunk_bytes = 1024;
  std::uint64_t seed = 1;
};

struct BenchReport {
  bool empty = true;
  std::uint64_t stream_bytes = 0;
  double chaff_ratio = 0;
  unsigned trials = 0;
  /// Median payload throughput, MB/s (10^6 bytes).
  double wc_mbps = 0;
  double baseline_mbps = 0;
  std::uint64_t wc_wire_bytes = 0;
  std::uint64_t baseline_wire_bytes = 0;
};

/// Times (a) W&C transmit + winnow against (b) AES-128 encryption of every
/// payload block plus an HMAC-SHA1 tag per packet, verified and decrypted
/// on receipt. Single-threaded.
///
/// A zero-length stream yields an empty report. Non-empty streams below
/// 1 MiB, or zero trials, throw InvalidParameter.
BenchReport wallclock_bench(const BenchConfig& config);

}  // namespace gridsec::cost
