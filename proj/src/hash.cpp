#include "cogledger/hash.hpp"

#include <sodium.h>

#include <new>
#include <stdexcept>

#include "cogledger/crypto.hpp"

namespace cogledger {

static_assert(sizeof(crypto_hash_sha256_state) <= 128);

std::string to_hex(ByteView bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

namespace {
int nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
  Bytes out(hex.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = nibble(hex[2 * i]);
    int lo = nibble(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("invalid hex character");
    out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
  }
  return out;
}

Hash32 Hash32::from_hex(std::string_view hex) {
  if (hex.size() != 64) throw std::invalid_argument("hash must be 64 hex characters");
  Bytes raw = cogledger::from_hex(hex);
  Hash32 h;
  std::copy(raw.begin(), raw.end(), h.bytes.begin());
  return h;
}

bool Hash32::is_zero() const {
  for (auto b : bytes)
    if (b != 0) return false;
  return true;
}

Hash32 sha256(ByteView data) {
  crypto_init();
  Hash32 h;
  crypto_hash_sha256(h.bytes.data(), data.data(), data.size());
  return h;
}

Sha256::Sha256() {
  crypto_init();
  crypto_hash_sha256_init(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()));
}

Sha256& Sha256::update(ByteView data) {
  crypto_hash_sha256_update(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()),
                            data.data(), data.size());
  return *this;
}

Sha256& Sha256::update(std::uint8_t byte) { return update(ByteView(&byte, 1)); }

Hash32 Sha256::finish() {
  Hash32 h;
  crypto_hash_sha256_final(reinterpret_cast<crypto_hash_sha256_state*>(state_.data()),
                           h.bytes.data());
  return h;
}

}  // namespace cogledger
