#pragma once

#include <cstdint>

#include "gridsec/crypto/op_count.hpp"

namespace gridsec::crypto {

enum class Algorithm { kHmacSha1, kAes128 };

/// Runs the instrumented implementation over a zero-filled message of
/// `message_bytes` and returns the operations actually executed.
///
/// HMAC-SHA1 uses a fixed 20-byte key; AES-128 expands one key and then
/// encrypts ceil(message_bytes / 16) blocks independently.
OpCount instrumented_run(Algorithm algorithm, std::uint64_t message_bytes);

}  // namespace gridsec::crypto
