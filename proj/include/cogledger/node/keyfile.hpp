#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "cogledger/crypto.hpp"

namespace cogledger::node {

class KeyfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The owner's account key (signs token ops and owner API requests) and the
// node's validator key (signs blocks).
struct KeyBundle {
  KeyPair account;
  KeyPair validator;

  static KeyBundle generate() { return {KeyPair::generate(), KeyPair::generate()}; }
};

// Passphrase-encrypted pair of Ed25519 seeds. JSON document:
//   {"version": 1, "kdf": "argon2id13", "opslimit": N, "memlimit": N,
//    "salt": hex, "nonce": hex, "ciphertext": hex,
//    "account_public_key": hex, "validator_public_key": hex}
// The 64 seed bytes (account then validator) are sealed with
// XSalsa20-Poly1305 under an Argon2id-derived key. Mode 0600.
void write_keyfile(const std::filesystem::path& path, const KeyBundle& keys, std::string_view passphrase);

// Throws KeyfileError on a missing file, wrong passphrase or tampering.
KeyBundle read_keyfile(const std::filesystem::path& path, std::string_view passphrase);

// Public account key stored in the file; no passphrase needed.
PublicKey keyfile_account_key(const std::filesystem::path& path);

}  // namespace cogledger::node
