#include "gridsec/crypto/hmac.hpp"

#include <array>

#include "gridsec/errors.hpp"

namespace gridsec::crypto {

MacKey::MacKey(Bytes bytes) : bytes_(std::move(bytes)) {
  if (bytes_.empty() || bytes_.size() > kMaxBytes) {
    throw SizeError("MAC key must be 1 to 64 bytes");
  }
}

HmacSha1::HmacSha1(ByteView key) { init(key, nullptr); }

HmacSha1::HmacSha1(ByteView key, OpCount& ops) { init(key, &ops); }

void HmacSha1::init(ByteView key, OpCount* ops) {
  if (key.empty()) throw SizeError("HMAC key must be non-empty");

  std::array<std::uint8_t, Sha1::kBlockBytes> k0{};
  if (key.size() > Sha1::kBlockBytes) {
    Digest160 d = ops ? sha1(key, *ops) : sha1(key);
    std::copy(d.begin(), d.end(), k0.begin());
  } else {
    std::copy(key.begin(), key.end(), k0.begin());
  }

  std::array<std::uint8_t, Sha1::kBlockBytes> ipad, opad;
  for (std::size_t i = 0; i < k0.size(); ++i) {
    ipad[i] = k0[i] ^ 0x36;
    opad[i] = k0[i] ^ 0x5c;
  }
  if (ops) ops->xor32 += 2 * Sha1::kBlockBytes / 4;  // two 64-byte pads, word-wise

  inner_ = ops ? Sha1(*ops) : Sha1();
  outer_ = ops ? Sha1(*ops) : Sha1();
  inner_.update(ipad);
  outer_.update(opad);
  inner_.set_tally(nullptr);
  outer_.set_tally(nullptr);
}

Digest160 HmacSha1::mac(std::initializer_list<ByteView> parts) const {
  Sha1 in = inner_;
  for (auto p : parts) in.update(p);
  Digest160 d = in.finish();
  Sha1 out = outer_;
  out.update(d);
  return out.finish();
}

Digest160 HmacSha1::mac(std::initializer_list<ByteView> parts, OpCount& ops) const {
  Sha1 in = inner_;
  in.set_tally(&ops);
  for (auto p : parts) in.update(p);
  Digest160 d = in.finish();
  Sha1 out = outer_;
  out.set_tally(&ops);
  out.update(d);
  return out.finish();
}

Digest160 hmac_sha1(ByteView key, ByteView message) { return HmacSha1(key).mac(message); }

Digest160 hmac_sha1(ByteView key, ByteView message, OpCount& ops) {
  HmacSha1 h(key, ops);
  return h.mac({message}, ops);
}

}  // namespace gridsec::crypto
