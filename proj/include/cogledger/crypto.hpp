#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "cogledger/hash.hpp"

namespace cogledger {

// Initializes libsodium once; safe to call from any thread.
void crypto_init();

void random_bytes(std::span<std::uint8_t> out);

struct PublicKey {
  std::array<std::uint8_t, 32> bytes{};

  std::string hex() const { return to_hex(bytes); }
  static PublicKey from_hex(std::string_view hex);
  auto operator<=>(const PublicKey&) const = default;
};

// Ed25519 signing key in libsodium layout (seed || public key).
struct SecretKey {
  std::array<std::uint8_t, 64> bytes{};
};

struct KeyPair {
  PublicKey pub;
  SecretKey secret;

  static KeyPair generate();
  static KeyPair from_seed(std::span<const std::uint8_t, 32> seed);
  // Test and simulation helper: seed = SHA-256(label).
  static KeyPair from_label(std::string_view label);

  std::array<std::uint8_t, 32> seed() const;
};

inline constexpr std::size_t kSignatureSize = 64;

Bytes sign(const SecretKey& key, ByteView message);
bool verify(const PublicKey& key, ByteView message, ByteView signature);

// Accounts and validators are named by the hash of their public key.
inline Hash32 key_id(const PublicKey& key) { return sha256(ByteView(key.bytes)); }
inline AccountId account_of(const PublicKey& key) { return {key_id(key)}; }

}  // namespace cogledger
