#include "gridsec/bench.hpp"

#include <algorithm>
#include <chrono>
#include <vector>

#include "gridsec/crypto/aes.hpp"
#include "gridsec/crypto/hmac.hpp"
#include "gridsec/errors.hpp"
#include "gridsec/wnc/channel.hpp"

namespace gridsec::cost {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mbps(std::uint64_t bytes, Clock::duration d) {
  const double secs = std::chrono::duration<double>(d).count();
  return secs > 0 ? static_cast<double>(bytes) / 1e6 / secs : 0.0;
}

std::uint64_t run_wc(const wnc::ChannelConfig& cfg, const std::vector<Bytes>& chunks) {
  wnc::Sender tx(cfg);
  auto packets = tx.transmit(chunks);
  std::uint64_t wire = 0;
  wnc::Receiver rx(cfg);
  for (const auto& p : packets) {
    wire += wnc::kHeaderBytes + p.payload.size() + crypto::kDigestBytes;
    rx.push(p);
  }
  auto out = rx.finish();
  if (out.size() != chunks.size()) throw Error("benchmark W&C roundtrip lost packets");
  return wire;
}

std::uint64_t run_baseline(ByteView aes_key, ByteView mac_key, const std::vector<Bytes>& chunks) {
  crypto::Aes128 aes(aes_key);
  crypto::HmacSha1 hmac(mac_key);

  struct Sealed {
    std::uint32_t seq;
    Bytes ciphertext;
    crypto::Digest160 tag;
  };
  std::vector<Sealed> wire;
  wire.reserve(chunks.size());
  std::uint64_t wire_bytes = 0;
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const auto& pt = chunks[i];
    Sealed s;
    s.seq = static_cast<std::uint32_t>(i);
    s.ciphertext.assign((pt.size() + 15) / 16 * 16, 0);
    std::copy(pt.begin(), pt.end(), s.ciphertext.begin());
    for (std::size_t off = 0; off < s.ciphertext.size(); off += 16) {
      aes.encrypt(s.ciphertext.data() + off, s.ciphertext.data() + off);
    }
    s.tag = wnc::packet_mac(hmac, 160, s.seq, s.ciphertext);
    wire_bytes += wnc::kHeaderBytes + s.ciphertext.size() + crypto::kDigestBytes;
    wire.push_back(std::move(s));
  }

  std::uint64_t recovered = 0;
  Bytes plain;
  for (const auto& s : wire) {
    if (wnc::packet_mac(hmac, 160, s.seq, s.ciphertext) != s.tag) throw Error("baseline tag mismatch");
    plain.resize(s.ciphertext.size());
    for (std::size_t off = 0; off < s.ciphertext.size(); off += 16) {
      aes.decrypt(s.ciphertext.data() + off, plain.data() + off);
    }
    recovered += plain.size();
  }
  if (recovered < chunks.size()) throw Error("baseline roundtrip lost data");
  return wire_bytes;
}

}  // namespace

BenchReport wallclock_bench(const BenchConfig& config) {
  BenchReport r;
  r.chaff_ratio = config.chaff_ratio;
  r.trials = config.trials;
  if (config.stream_bytes == 0) return r;
  if (config.stream_bytes < (1u << 20)) throw InvalidParameter("benchmark streams must be at least 1 MiB");
  if (config.trials == 0) throw InvalidParameter("benchmark needs at least one trial");

  Rng rng(config.seed);
  Bytes payload(config.stream_bytes);
  rng.fill(payload.begin(), payload.end());
  const auto chunks = wnc::chunk_stream(payload, config.chunk_bytes);

  Bytes mac_key(20), aes_key(16);
  rng.fill(mac_key.begin(), mac_key.end());
  rng.fill(aes_key.begin(), aes_key.end());

  wnc::ChannelConfig cfg{.key = crypto::MacKey(mac_key), .chaff_ratio = config.chaff_ratio, .rng_seed = config.seed};

  std::vector<double> wc, base;
  for (unsigned t = 0; t < config.trials; ++t) {
    auto t0 = Clock::now();
    r.wc_wire_bytes = run_wc(cfg, chunks);
    auto t1 = Clock::now();
    r.baseline_wire_bytes = run_baseline(aes_key, mac_key, chunks);
    auto t2 = Clock::now();
    wc.push_back(mbps(config.stream_bytes, t1 - t0));
    base.push_back(mbps(config.stream_bytes, t2 - t1));
  }
  r.empty = false;
  r.stream_bytes = config.stream_bytes;
  r.wc_mbps = median(wc);
  r.baseline_mbps = median(base);
  return r;
}

}  // namespace gridsec::cost
