#include "gridsec/crypto/instrumented.hpp"

#include <array>

#include "gridsec/crypto/aes.hpp"
#include "gridsec/crypto/hmac.hpp"

namespace gridsec::crypto {

OpCount instrumented_run(Algorithm algorithm, std::uint64_t message_bytes) {
  OpCount ops;
  if (algorithm == Algorithm::kHmacSha1) {
    std::array<std::uint8_t, 20> key;
    key.fill(0x0b);
    HmacSha1 mac(key, ops);
    Bytes message(static_cast<std::size_t>(message_bytes), 0);
    mac.mac({message}, ops);
    return ops;
  }

  const std::array<std::uint8_t, 16> key{};
  Aes128 aes(key, ops);
  const std::array<std::uint8_t, 16> block{};
  const std::uint64_t blocks = (message_bytes + 15) / 16;
  for (std::uint64_t i = 0; i < blocks; ++i) aes.encrypt(block, ops);
  return ops;
}

}  // namespace gridsec::crypto
