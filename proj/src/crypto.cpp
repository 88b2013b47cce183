#include "cogledger/crypto.hpp"

#include <sodium.h>

#include <algorithm>
#include <mutex>
#include <stdexcept>

namespace cogledger {

void crypto_init() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (sodium_init() < 0) throw std::runtime_error("libsodium initialization failed");
  });
}

void random_bytes(std::span<std::uint8_t> out) {
  crypto_init();
  randombytes_buf(out.data(), out.size());
}

PublicKey PublicKey::from_hex(std::string_view hex) {
  if (hex.size() != 64) throw std::invalid_argument("public key must be 64 hex characters");
  Bytes raw = cogledger::from_hex(hex);
  PublicKey k;
  std::copy(raw.begin(), raw.end(), k.bytes.begin());
  return k;
}

KeyPair KeyPair::generate() {
  crypto_init();
  KeyPair kp;
  crypto_sign_keypair(kp.pub.bytes.data(), kp.secret.bytes.data());
  return kp;
}

KeyPair KeyPair::from_seed(std::span<const std::uint8_t, 32> seed) {
  crypto_init();
  KeyPair kp;
  crypto_sign_seed_keypair(kp.pub.bytes.data(), kp.secret.bytes.data(), seed.data());
  return kp;
}

KeyPair KeyPair::from_label(std::string_view label) {
  Hash32 seed = sha256(label);
  return from_seed(std::span<const std::uint8_t, 32>(seed.bytes));
}

std::array<std::uint8_t, 32> KeyPair::seed() const {
  std::array<std::uint8_t, 32> s{};
  std::copy_n(secret.bytes.begin(), 32, s.begin());
  return s;
}

Bytes sign(const SecretKey& key, ByteView message) {
  crypto_init();
  Bytes sig(kSignatureSize);
  crypto_sign_detached(sig.data(), nullptr, message.data(), message.size(), key.bytes.data());
  return sig;
}

bool verify(const PublicKey& key, ByteView message, ByteView signature) {
  crypto_init();
  if (signature.size() != kSignatureSize) return false;
  return crypto_sign_verify_detached(signature.data(), message.data(), message.size(),
                                     key.bytes.data()) == 0;
}

}  // namespace cogledger
