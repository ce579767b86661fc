#include "gridsec/wnc/channel.hpp"

#include <algorithm>
#include <cmath>

namespace gridsec::wnc {

namespace {

constexpr std::uint64_t kSeqSpace = std::uint64_t{1} << 32;

void check_payload(ByteView payload) {
  if (payload.empty() || payload.size() > kMaxPayloadBytes) {
    throw SizeError("payload must be 1 to 1024 bytes");
  }
}

crypto::Digest160 tagged_mac(const crypto::HmacSha1& hmac, crypto::OpCount* ops, unsigned mac_bits,
                             std::uint32_t seq, ByteView payload) {
  const std::uint8_t be[4] = {static_cast<std::uint8_t>(seq >> 24), static_cast<std::uint8_t>(seq >> 16),
                              static_cast<std::uint8_t>(seq >> 8), static_cast<std::uint8_t>(seq)};
  crypto::Digest160 d = ops ? hmac.mac({ByteView(be), payload}, *ops) : hmac.mac({ByteView(be), payload});
  std::fill(d.begin() + mac_bits / 8, d.end(), 0);
  return d;
}

crypto::HmacSha1 make_hmac(const crypto::MacKey& key, crypto::OpCount* ops) {
  return ops ? crypto::HmacSha1(key.bytes(), *ops) : crypto::HmacSha1(key.bytes());
}

}  // namespace

void ChannelConfig::validate() const {
  if (!(chaff_ratio >= 0.0) || !std::isfinite(chaff_ratio)) {
    throw InvalidParameter("chaff ratio must be a finite non-negative number");
  }
  if (mac_bits < 8 || mac_bits > 160 || mac_bits % 8 != 0) {
    throw InvalidParameter("MAC truncation must be a multiple of 8 between 8 and 160 bits");
  }
  if (mac_bits < 64 && !audit_mode) {
    throw InvalidParameter("MAC truncation below 64 bits is only allowed in audit mode");
  }
}

crypto::Digest160 packet_mac(const crypto::HmacSha1& hmac, unsigned mac_bits, std::uint32_t seq,
                             ByteView payload) {
  return tagged_mac(hmac, nullptr, mac_bits, seq, payload);
}

WcPacket make_wheat(const ChannelConfig& config, std::uint32_t seq, ByteView payload) {
  config.validate();
  check_payload(payload);
  crypto::HmacSha1 hmac(config.key);
  return WcPacket{seq, Bytes(payload.begin(), payload.end()), packet_mac(hmac, config.mac_bits, seq, payload)};
}

Verdict verify(const ChannelConfig& config, const WcPacket& packet) {
  config.validate();
  crypto::HmacSha1 hmac(config.key);
  return packet_mac(hmac, config.mac_bits, packet.seq, packet.payload) == packet.mac ? Verdict::kWheat
                                                                                    : Verdict::kChaff;
}

Sender::Sender(ChannelConfig config, crypto::OpCount* ops)
    : config_(std::move(config)), ops_(ops), hmac_(make_hmac(config_.key, ops)), rng_(config_.rng_seed) {
  config_.validate();
}

WcPacket Sender::make_wheat(std::uint32_t seq, ByteView payload) {
  check_payload(payload);
  ++mac_calls_;
  return WcPacket{seq, Bytes(payload.begin(), payload.end()),
                  tagged_mac(hmac_, ops_, config_.mac_bits, seq, payload)};
}

WcPacket Sender::make_chaff(std::uint32_t seq, ByteView wheat_payload) {
  check_payload(wheat_payload);
  WcPacket p;
  p.seq = seq;
  p.payload.resize(wheat_payload.size());
  if (config_.chaff_payload == ChaffPayload::kComplement) {
    std::transform(wheat_payload.begin(), wheat_payload.end(), p.payload.begin(),
                   [](std::uint8_t b) { return static_cast<std::uint8_t>(~b); });
  } else {
    rng_.fill(p.payload.begin(), p.payload.end());
  }
  rng_.fill(p.mac.begin(), p.mac.begin() + config_.mac_bits / 8);
  ++chaff_count_;
  return p;
}

std::vector<WcPacket> Sender::transmit(std::span<const Bytes> chunks) {
  if (chunks.size() > kSeqSpace) throw SizeError("stream exceeds the 32-bit sequence space");

  struct Slot {
    std::int64_t key;
    WcPacket packet;
  };
  const double whole = std::floor(config_.chaff_ratio);
  const double frac = config_.chaff_ratio - whole;

  std::vector<Slot> slots;
  slots.reserve(static_cast<std::size_t>(static_cast<double>(chunks.size()) * (1.0 + config_.chaff_ratio)) + 1);
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const auto seq = static_cast<std::uint32_t>(i);
    const std::int64_t base = static_cast<std::int64_t>(i) * 8;
    slots.push_back({base, make_wheat(seq, chunks[i])});

    auto n_chaff = static_cast<std::uint64_t>(whole);
    if (frac > 0.0 && rng_.unit() < frac) ++n_chaff;
    for (std::uint64_t c = 0; c < n_chaff; ++c) {
      // Offsets of up to 16 key units are two wheat slots either side.
      const auto offset = static_cast<std::int64_t>(rng_.below(33)) - 16;
      slots.push_back({base + offset, make_chaff(seq, chunks[i])});
    }
  }
  std::stable_sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) { return a.key < b.key; });

  std::vector<WcPacket> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(s.packet));
  return out;
}

Receiver::Receiver(ChannelConfig config, crypto::OpCount* ops)
    : config_(std::move(config)), ops_(ops), hmac_(make_hmac(config_.key, ops)) {
  config_.validate();
}

bool Receiver::seen(std::uint32_t seq) const {
  return seq < state_.expected_seq || state_.pending.contains(seq);
}

Verdict Receiver::push(const WcPacket& packet) {
  ++mac_calls_;
  const auto expected = tagged_mac(hmac_, ops_, config_.mac_bits, packet.seq, packet.payload);
  if (expected != packet.mac || seen(packet.seq)) {
    ++state_.rejected_count;
    return Verdict::kChaff;
  }
  if (packet.seq == state_.expected_seq) {
    state_.accepted.push_back(packet.payload);
    ++state_.expected_seq;
    for (auto it = state_.pending.begin(); it != state_.pending.end() && it->first == state_.expected_seq;) {
      state_.accepted.push_back(std::move(it->second));
      ++state_.expected_seq;
      it = state_.pending.erase(it);
    }
  } else {
    state_.pending.emplace(packet.seq, packet.payload);
  }
  return Verdict::kWheat;
}

std::vector<Bytes> Receiver::finish() {
  if (!state_.pending.empty()) throw IncompleteStream(state_.accepted, state_.rejected_count);
  return std::move(state_.accepted);
}

std::vector<WcPacket> transmit(const ChannelConfig& config, std::span<const Bytes> chunks) {
  Sender sender(config);
  return sender.transmit(chunks);
}

WinnowResult winnow(const ChannelConfig& config, std::span<const WcPacket> packets) {
  Receiver rx(config);
  for (const auto& p : packets) rx.push(p);
  WinnowResult r;
  r.rejected_count = rx.state().rejected_count;
  r.payloads = rx.finish();
  return r;
}

std::vector<Bytes> chunk_stream(ByteView data, std::size_t chunk_bytes) {
  if (chunk_bytes == 0 || chunk_bytes > kMaxPayloadBytes) throw InvalidParameter("chunk size must be 1 to 1024");
  std::vector<Bytes> out;
  for (std::size_t off = 0; off < data.size(); off += chunk_bytes) {
    auto n = std::min(chunk_bytes, data.size() - off);
    out.emplace_back(data.begin() + static_cast<std::ptrdiff_t>(off),
                     data.begin() + static_cast<std::ptrdiff_t>(off + n));
  }
  return out;
}

Bytes join(std::span<const Bytes> chunks) {
  Bytes out;
  for (const auto& c : chunks) out.insert(out.end(), c.begin(), c.end());
  return out;
}

}  // namespace gridsec::wnc
