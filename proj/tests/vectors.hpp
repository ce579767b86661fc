#pragma once

// Published reference vectors: FIPS 180-1 (SHA-1), RFC 2202 (HMAC-SHA1)
// and FIPS 197 appendices (AES-128).

#include <string>
#include <vector>

#include "gridsec/bytes.hpp"

namespace gridsec::testvec {

struct HashVector {
  std::string message;
  std::size_t repeat;
  const char* digest;
};

inline const std::vector<HashVector> kSha1 = {
    {"", 1, "da39a3ee5e6b4b0d3255bfef95601890afd80709"},
    {"abc", 1, "a9993e364706816aba3e25717850c26c9cd0d89d"},
    {"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq", 1, "84983e441c3bd26ebaae4aa1f95129e5e54670f1"},
    {"a", 1000000, "34aa973cd4c4daa4f61eeb2bdbad27316534016f"},
};

struct MacVector {
  Bytes key;
  Bytes data;
  const char* digest;
};

inline std::vector<MacVector> rfc2202() {
  Bytes k4;
  for (int i = 1; i <= 25; ++i) k4.push_back(static_cast<std::uint8_t>(i));
  return {
      {Bytes(20, 0x0b), to_bytes("Hi There"), "b617318655057264e28bc0b6fb378c8ef146be00"},
      {to_bytes("Jefe"), to_bytes("what do ya want for nothing?"), "effcdf6ae5eb2fa2d27416d5f184df9c259a7c79"},
      {Bytes(20, 0xaa), Bytes(50, 0xdd), "125d7342b9ac11cd91a39af48aa17b4f63f175d3"},
      {k4, Bytes(50, 0xcd), "4c9007f4026250c6bc8414f9bf50c86c2d7235da"},
      {Bytes(20, 0x0c), to_bytes("Test With Truncation"), "4c1a03424b55e07fe7f27be1d58bb9324a9a5a04"},
      {Bytes(80, 0xaa), to_bytes("Test Using Larger Than Block-Size Key - Hash Key First"),
       "aa4ae5e15272d00e95705637ce8a3b55ed402112"},
      {Bytes(80, 0xaa), to_bytes("Test Using Larger Than Block-Size Key and Larger Than One Block-Size Data"),
       "e8e99d0f45237d786d6bbaa7965c7808bbff1a91"},
  };
}

struct BlockVector {
  const char* key;
  const char* plaintext;
  const char* ciphertext;
};

inline const std::vector<BlockVector> kAes128 = {
    {"000102030405060708090a0b0c0d0e0f", "00112233445566778899aabbccddeeff", "69c4e0d86a7b0430d8cdb78070b4c55a"},
    {"2b7e151628aed2a6abf7158809cf4f3c", "3243f6a8885a308d313198a2e0370734", "3925841d02dc09fbdc118597196a0b32"},
};

}  // namespace gridsec::testvec
