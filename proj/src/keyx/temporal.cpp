#include "gridsec/keyx/temporal.hpp"

#include <algorithm>
#include <set>

namespace gridsec::keyx {

void TemporalParams::validate() const {
  if (!is_prime(p)) throw InvalidParameter("temporal prime must be prime");
  if (p >= (std::uint64_t{1} << 63)) throw InvalidParameter("temporal prime must be below 2^63");
  if (key_bits < 1 || key_bits > SecretKey::kMaxBits) throw InvalidParameter("key length must be 1 to 4096 bits");
  if (p <= key_bits) throw InvalidParameter("temporal prime must exceed the key length");
  if (parts < 2 || parts > key_bits) throw InvalidParameter("part count must satisfy 2 <= N <= L");
}

void SplitPlan::validate(const TemporalParams& params) const {
  if (positions.size() != params.parts - 1) throw InvalidParameter("split plan needs N-1 positions");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] < 1 || positions[i] > params.key_bits - 1) {
      throw InvalidParameter("split position outside [1, L-1]");
    }
    if (i > 0 && positions[i] <= positions[i - 1]) throw InvalidParameter("split positions must increase");
  }
}

TemporalExchange build_exchange(const SecretKey& key, const TemporalParams& params, const SplitPlan& plan,
                                std::span<const std::uint64_t> xs, Rng& rng) {
  params.validate();
  if (key.bit_length() != params.key_bits) throw SizeError("key length does not match the parameters");
  plan.validate(params);
  if (xs.size() != params.parts) throw InvalidParameter("need one evaluation point per part");
  if (std::set<std::uint64_t>(xs.begin(), xs.end()).size() != xs.size()) {
    throw InvalidParameter("evaluation points must be distinct");
  }
  if (std::any_of(xs.begin(), xs.end(), [&](auto x) { return x >= params.p; })) {
    throw InvalidParameter("evaluation points must be field elements");
  }

  PrimeField f(params.p);
  const auto P = poly::from_roots(f, plan.positions);

  TemporalExchange ex;
  ex.key_bits = static_cast<std::uint16_t>(params.key_bits);
  ex.parts = static_cast<std::uint16_t>(params.parts);
  const std::size_t slot_bits = params.slot_bytes() * 8;
  std::uint64_t start = 0;
  for (std::size_t i = 0; i < params.parts; ++i) {
    const std::uint64_t end = i + 1 < params.parts ? plan.positions[i] : params.key_bits;
    BitString slot = key.bits().slice(start, end - start);
    while (slot.size() < slot_bits) {
      const std::size_t take = std::min<std::size_t>(64, slot_bits - slot.size());
      slot.append(rng.next() >> (64 - take), take);
    }
    TemporalPacket pkt;
    pkt.seq = static_cast<std::uint16_t>(i + 1);
    pkt.slot.assign(slot.bytes().begin(), slot.bytes().end());
    pkt.x = xs[i];
    pkt.y = poly::evaluate(f, P, xs[i]);
    ex.packets.push_back(std::move(pkt));
    start = end;
  }
  return ex;
}

TemporalExchange temporal_send(const SecretKey& key, const TemporalParams& params, Rng& rng) {
  params.validate();
  if (params.p - 1 - params.key_bits < params.parts) {
    throw InvalidParameter("prime too small to draw evaluation points above the key length");
  }

  // Uniform (N-1)-subset of [1, L-1] (Floyd's algorithm).
  std::set<std::uint64_t> chosen;
  const std::uint64_t m = params.key_bits - 1;
  for (std::uint64_t j = m - (params.parts - 1) + 1; j <= m; ++j) {
    const std::uint64_t r = 1 + rng.below(j);
    chosen.insert(chosen.contains(r) ? j : r);
  }
  SplitPlan plan{std::vector<std::uint64_t>(chosen.begin(), chosen.end())};

  std::set<std::uint64_t> seen;
  std::vector<std::uint64_t> xs;
  while (xs.size() < params.parts) {
    const std::uint64_t x = rng.between(params.key_bits + 1, params.p - 1);
    if (seen.insert(x).second) xs.push_back(x);
  }
  return build_exchange(key, params, plan, xs, rng);
}

TemporalExchange temporal_send(const SecretKey& key, const TemporalParams& params, std::uint64_t seed) {
  Rng rng(seed);
  return temporal_send(key, params, rng);
}

namespace {

struct Ordered {
  std::vector<const TemporalPacket*> by_seq;
  std::vector<std::uint64_t> roots;
};

Ordered check_and_solve(std::span<const TemporalPacket> packets, const TemporalParams& params) {
  params.validate();
  if (packets.size() != params.parts) throw MalformedInput("expected exactly N packets");

  Ordered o;
  o.by_seq.assign(params.parts, nullptr);
  std::set<std::uint64_t> xs_seen;
  std::vector<std::uint64_t> xs, ys;
  for (const auto& p : packets) {
    if (p.seq < 1 || p.seq > params.parts || o.by_seq[p.seq - 1]) throw MalformedInput("bad or repeated part seq");
    if (p.slot.size() != params.slot_bytes()) throw MalformedInput("slot width does not match key length");
    if (!xs_seen.insert(p.x).second) throw MalformedInput("duplicate evaluation point");
    if (p.x >= params.p || p.y >= params.p) throw TamperError("evaluation outside the field");
    o.by_seq[p.seq - 1] = &p;
    xs.push_back(p.x);
    ys.push_back(p.y);
  }

  PrimeField f(params.p);
  const auto P = poly::interpolate(f, xs, ys);
  if (P.back() != 1) throw TamperError("interpolated polynomial is not monic of degree N-1");

  for (std::uint64_t r = 1; r < params.key_bits; ++r) {
    if (poly::evaluate(f, P, r) == 0) o.roots.push_back(r);
  }
  if (o.roots.size() != params.parts - 1) throw TamperError("root count does not match N-1");
  return o;
}

}  // namespace

std::vector<std::uint64_t> recover_split_positions(std::span<const TemporalPacket> packets,
                                                   const TemporalParams& params) {
  return check_and_solve(packets, params).roots;
}

SecretKey temporal_receive(std::span<const TemporalPacket> packets, const TemporalParams& params) {
  const auto o = check_and_solve(packets, params);
  BitString key;
  std::uint64_t start = 0;
  for (std::size_t i = 0; i < params.parts; ++i) {
    const std::uint64_t end = i + 1 < params.parts ? o.roots[i] : params.key_bits;
    const auto& slot = o.by_seq[i]->slot;
    for (std::uint64_t b = 0; b < end - start; ++b) key.push_back((slot[b / 8] >> (7 - b % 8)) & 1);
    start = end;
  }
  return SecretKey(std::move(key));
}

AttackReport adversary_attack(std::span<const TemporalPacket> packets, std::span<const std::uint64_t> candidates,
                              std::size_t key_bits, std::size_t parts) {
  AttackReport report;
  for (std::uint64_t prime : candidates) {
    DecodeAttempt a;
    a.prime = prime;
    try {
      a.key = temporal_receive(packets, TemporalParams{prime, key_bits, parts});
      a.valid = true;
      ++report.valid_decodes;
    } catch (const Error& e) {
      a.reason = e.what();
    }
    report.attempts.push_back(std::move(a));
  }
  return report;
}

void encode_packet_to(Bytes& out, const TemporalPacket& packet) {
  put_be16(out, packet.seq);
  put_be16(out, static_cast<std::uint16_t>(packet.slot.size()));
  out.insert(out.end(), packet.slot.begin(), packet.slot.end());
  put_be64(out, packet.x);
  put_be64(out, packet.y);
}

TemporalPacket decode_packet(ByteReader& in) {
  TemporalPacket p;
  p.seq = in.be16();
  const std::uint16_t len = in.be16();
  auto slot = in.take(len);
  p.slot.assign(slot.begin(), slot.end());
  p.x = in.be64();
  p.y = in.be64();
  return p;
}

Bytes encode_exchange(const TemporalExchange& exchange) {
  Bytes out;
  put_be16(out, kExchangeMagic);
  put_be16(out, exchange.key_bits);
  put_be16(out, exchange.parts);
  for (const auto& p : exchange.packets) encode_packet_to(out, p);
  return out;
}

TemporalExchange decode_exchange(ByteView data) {
  ByteReader in(data);
  if (in.be16() != kExchangeMagic) throw MalformedInput("bad exchange header magic");
  TemporalExchange ex;
  ex.key_bits = in.be16();
  ex.parts = in.be16();
  while (!in.done()) ex.packets.push_back(decode_packet(in));
  return ex;
}

}  // namespace gridsec::keyx
