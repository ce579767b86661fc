#pragma once

#include <cstdint>

#include "gridsec/bytes.hpp"

namespace gridsec::tools {

/// Binds 127.0.0.1:port, accepts one connection and reads it to EOF.
Bytes receive_once(std::uint16_t port);

/// Connects to 127.0.0.1:port, retrying for up to `wait_ms`, and writes all
/// of `data`.
void send_once(std::uint16_t port, ByteView data, int wait_ms = 5000);

}  // namespace gridsec::tools
