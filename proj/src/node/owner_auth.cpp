#include "cogledger/node/owner_auth.hpp"

#include <stdexcept>

namespace cogledger::node {

std::string owner_request_message(std::string_view method, std::string_view path, std::uint64_t timestamp,
                                  std::string_view body) {
  std::string msg;
  msg.append(method).append("\n").append(path).append("\n").append(std::to_string(timestamp)).append("\n");
  msg.append(sha256(body).hex());
  return msg;
}

std::string sign_owner_request(const KeyPair& owner, std::string_view method, std::string_view path,
                               std::uint64_t timestamp, std::string_view body) {
  return to_hex(sign(owner.secret, as_bytes(owner_request_message(method, path, timestamp, body))));
}

bool verify_owner_request(const PublicKey& owner, std::string_view method, std::string_view path,
                          std::uint64_t timestamp, std::string_view body, std::string_view signature_hex,
                          std::uint64_t now) {
  std::uint64_t skew = timestamp > now ? timestamp - now : now - timestamp;
  if (skew > kOwnerClockSkewSeconds) return false;
  Bytes sig;
  try {
    sig = from_hex(signature_hex);
  } catch (const std::invalid_argument&) {
    return false;
  }
  return verify(owner, as_bytes(owner_request_message(method, path, timestamp, body)), sig);
}

}  // namespace cogledger::node
