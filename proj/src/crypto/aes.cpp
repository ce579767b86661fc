#include "gridsec/crypto/aes.hpp"

#include "gridsec/errors.hpp"

namespace gridsec::crypto {

namespace {

constexpr std::array<std::uint8_t, 256> make_sbox() {
  std::array<std::uint8_t, 256> s{};
  for (int i = 0; i < 256; ++i) s[i] = gf256::affine(gf256::inv(static_cast<std::uint8_t>(i)));
  return s;
}

constexpr std::array<std::uint8_t, 256> make_inv_sbox() {
  auto s = make_sbox();
  std::array<std::uint8_t, 256> r{};
  for (int i = 0; i < 256; ++i) r[s[i]] = static_cast<std::uint8_t>(i);
  return r;
}

constexpr std::array<std::uint8_t, 256> make_mul_table(std::uint8_t k) {
  std::array<std::uint8_t, 256> r{};
  for (int i = 0; i < 256; ++i) r[i] = gf256::mul(static_cast<std::uint8_t>(i), k);
  return r;
}

constexpr auto kSbox = make_sbox();
constexpr auto kInvSbox = make_inv_sbox();

constexpr auto kMul9 = make_mul_table(9);
constexpr auto kMul11 = make_mul_table(11);
constexpr auto kMul13 = make_mul_table(13);
constexpr auto kMul14 = make_mul_table(14);

static_assert(kSbox[0x00] == 0x63 && kSbox[0x53] == 0xed);

inline std::uint8_t xtime(std::uint8_t a) {
  return static_cast<std::uint8_t>((a << 1) ^ ((a & 0x80) ? 0x1b : 0));
}

// S-box access, either by table or computed with the inverse and affine map.
template <bool Computed, class T>
inline std::uint8_t sub(std::uint8_t b, T& t) {
  if constexpr (Computed) {
    t.gf8_inv();
    t.mul8();
    return gf256::affine(gf256::inv(b));
  } else {
    return kSbox[b];
  }
}

template <bool Computed, class T>
void expand_key(const std::uint8_t* key, std::array<std::uint8_t, 176>& rk, T& t) {
  std::copy(key, key + 16, rk.begin());
  std::uint8_t rcon = 0x01;
  for (int i = 4; i < 44; ++i) {
    std::uint8_t w[4] = {rk[4 * (i - 1)], rk[4 * (i - 1) + 1], rk[4 * (i - 1) + 2], rk[4 * (i - 1) + 3]};
    if (i % 4 == 0) {
      // RotWord
      t.shift32(2);
      std::uint8_t tmp = w[0];
      w[0] = w[1];
      w[1] = w[2];
      w[2] = w[3];
      w[3] = tmp;
      for (auto& b : w) b = sub<Computed>(b, t);
      w[0] ^= rcon;
      t.xor32();
      rcon = xtime(rcon);
      t.gf8_mul();
    }
    for (int j = 0; j < 4; ++j) rk[4 * i + j] = rk[4 * (i - 4) + j] ^ w[j];
    t.xor32();
  }
}

template <class T>
inline void add_round_key(std::uint8_t* s, const std::uint8_t* k, T& t) {
  for (int i = 0; i < 16; ++i) s[i] ^= k[i];
  t.xor32(4);
}

// State is column-major: s[4*c + r].
template <class T>
inline void shift_rows(std::uint8_t* s, T& t) {
  std::uint8_t tmp;
  tmp = s[1], s[1] = s[5], s[5] = s[9], s[9] = s[13], s[13] = tmp;
  tmp = s[2], s[2] = s[10], s[10] = tmp;
  tmp = s[6], s[6] = s[14], s[14] = tmp;
  tmp = s[3], s[3] = s[15], s[15] = s[11], s[11] = s[7], s[7] = tmp;
  t.shift32(6);  // three row rotations
}

inline void inv_shift_rows(std::uint8_t* s) {
  std::uint8_t tmp;
  tmp = s[13], s[13] = s[9], s[9] = s[5], s[5] = s[1], s[1] = tmp;
  tmp = s[2], s[2] = s[10], s[10] = tmp;
  tmp = s[6], s[6] = s[14], s[14] = tmp;
  tmp = s[7], s[7] = s[11], s[11] = s[15], s[15] = s[3], s[3] = tmp;
}

template <class T>
inline void mix_columns(std::uint8_t* s, T& t) {
  for (int c = 0; c < 4; ++c) {
    std::uint8_t* col = s + 4 * c;
    std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
    std::uint8_t x0 = xtime(a0), x1 = xtime(a1), x2 = xtime(a2), x3 = xtime(a3);
    col[0] = x0 ^ (x1 ^ a1) ^ a2 ^ a3;
    col[1] = a0 ^ x1 ^ (x2 ^ a2) ^ a3;
    col[2] = a0 ^ a1 ^ x2 ^ (x3 ^ a3);
    col[3] = (x0 ^ a0) ^ a1 ^ a2 ^ x3;
    t.gf8_mul(8);  // one multiply by 2 and one by 3 per output byte
    t.xor32(3);    // column combination, word-wise
  }
}

inline void inv_mix_columns(std::uint8_t* s) {
  for (int c = 0; c < 4; ++c) {
    std::uint8_t* col = s + 4 * c;
    std::uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
    col[0] = kMul14[a0] ^ kMul11[a1] ^ kMul13[a2] ^ kMul9[a3];
    col[1] = kMul9[a0] ^ kMul14[a1] ^ kMul11[a2] ^ kMul13[a3];
    col[2] = kMul13[a0] ^ kMul9[a1] ^ kMul14[a2] ^ kMul11[a3];
    col[3] = kMul11[a0] ^ kMul13[a1] ^ kMul9[a2] ^ kMul14[a3];
  }
}

template <bool Computed, class T>
void encrypt_block(const std::array<std::uint8_t, 176>& rk, const std::uint8_t* in, std::uint8_t* out, T& t) {
  std::uint8_t s[16];
  std::copy(in, in + 16, s);
  add_round_key(s, rk.data(), t);
  for (int round = 1; round <= 10; ++round) {
    for (auto& b : s) b = sub<Computed>(b, t);
    shift_rows(s, t);
    if (round != 10) mix_columns(s, t);
    add_round_key(s, rk.data() + 16 * round, t);
  }
  std::copy(s, s + 16, out);
}

void check_size(ByteView v, std::size_t n, const char* what) {
  if (v.size() != n) throw SizeError(std::string("AES-128 ") + what + " must be exactly 16 bytes");
}

}  // namespace

Aes128::Aes128(ByteView key) {
  check_size(key, kKeyBytes, "key");
  detail::NoTally t;
  expand_key<false>(key.data(), round_keys_, t);
}

Aes128::Aes128(ByteView key, OpCount& ops) {
  check_size(key, kKeyBytes, "key");
  detail::Tally t{ops};
  expand_key<true>(key.data(), round_keys_, t);
}

void Aes128::encrypt(const std::uint8_t* in, std::uint8_t* out) const {
  detail::NoTally t;
  encrypt_block<false>(round_keys_, in, out, t);
}

void Aes128::decrypt(const std::uint8_t* in, std::uint8_t* out) const {
  std::uint8_t s[16];
  std::copy(in, in + 16, s);
  detail::NoTally t;
  add_round_key(s, round_keys_.data() + 160, t);
  for (int round = 9; round >= 0; --round) {
    inv_shift_rows(s);
    for (auto& b : s) b = kInvSbox[b];
    add_round_key(s, round_keys_.data() + 16 * round, t);
    if (round != 0) inv_mix_columns(s);
  }
  std::copy(s, s + 16, out);
}

AesBlock Aes128::encrypt(ByteView block) const {
  check_size(block, kBlockBytes, "block");
  AesBlock out;
  encrypt(block.data(), out.data());
  return out;
}

AesBlock Aes128::decrypt(ByteView block) const {
  check_size(block, kBlockBytes, "block");
  AesBlock out;
  decrypt(block.data(), out.data());
  return out;
}

AesBlock Aes128::encrypt(ByteView block, OpCount& ops) const {
  check_size(block, kBlockBytes, "block");
  AesBlock out;
  detail::Tally t{ops};
  encrypt_block<true>(round_keys_, block.data(), out.data(), t);
  return out;
}

AesBlock aes128_encrypt_block(ByteView key, ByteView block) { return Aes128(key).encrypt(block); }

AesBlock aes128_decrypt_block(ByteView key, ByteView block) { return Aes128(key).decrypt(block); }

AesBlock aes128_encrypt_block(ByteView key, ByteView block, OpCount& ops) {
  return Aes128(key, ops).encrypt(block, ops);
}

}  // namespace gridsec::crypto
