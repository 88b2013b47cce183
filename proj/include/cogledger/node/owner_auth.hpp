#pragma once

#include <cstdint>
#include <string>

#include "cogledger/crypto.hpp"

namespace cogledger::node {

inline constexpr const char* kOwnerTimestampHeader = "X-Owner-Timestamp";
inline constexpr const char* kOwnerSignatureHeader = "X-Owner-Signature";
inline constexpr std::uint64_t kOwnerClockSkewSeconds = 300;

// Bytes the owner signs for one request:
//   METHOD "\n" PATH "\n" TIMESTAMP "\n" hex(sha256(body))
// PATH excludes the query string.
std::string owner_request_message(std::string_view method, std::string_view path, std::uint64_t timestamp,
                                  std::string_view body);

// Hex Ed25519 signature for the X-Owner-Signature header.
std::string sign_owner_request(const KeyPair& owner, std::string_view method, std::string_view path,
                               std::uint64_t timestamp, std::string_view body);

bool verify_owner_request(const PublicKey& owner, std::string_view method, std::string_view path,
                          std::uint64_t timestamp, std::string_view body, std::string_view signature_hex,
                          std::uint64_t now);

}  // namespace cogledger::node
