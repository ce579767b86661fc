#include "gridsec/wnc/packet.hpp"

#include <algorithm>

#include "gridsec/errors.hpp"

namespace gridsec::wnc {

void encode_to(Bytes& out, const WcPacket& packet) {
  if (packet.payload.empty() || packet.payload.size() > kMaxPayloadBytes) {
    throw SizeError("payload must be 1 to 1024 bytes");
  }
  put_be16(out, kMagic);
  out.push_back(kVersion);
  out.push_back(kTypeData);
  put_be32(out, packet.seq);
  put_be16(out, static_cast<std::uint16_t>(packet.payload.size()));
  out.insert(out.end(), packet.payload.begin(), packet.payload.end());
  out.insert(out.end(), packet.mac.begin(), packet.mac.end());
}

Bytes encode(const WcPacket& packet) {
  Bytes out;
  out.reserve(kHeaderBytes + packet.payload.size() + crypto::kDigestBytes);
  encode_to(out, packet);
  return out;
}

WcPacket decode(ByteReader& in) {
  if (in.be16() != kMagic) throw MalformedInput("bad packet magic");
  if (in.u8() != kVersion) throw MalformedInput("unsupported packet version");
  if (in.u8() != kTypeData) throw MalformedInput("unknown packet type");
  WcPacket p;
  p.seq = in.be32();
  const std::uint16_t len = in.be16();
  if (len == 0 || len > kMaxPayloadBytes) throw MalformedInput("payload length out of range");
  auto body = in.take(len);
  p.payload.assign(body.begin(), body.end());
  auto mac = in.take(crypto::kDigestBytes);
  std::copy(mac.begin(), mac.end(), p.mac.begin());
  return p;
}

std::vector<WcPacket> decode_stream(ByteView data) {
  ByteReader in(data);
  std::vector<WcPacket> out;
  while (!in.done()) out.push_back(decode(in));
  return out;
}

}  // namespace gridsec::wnc
