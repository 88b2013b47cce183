#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "cogledger/crypto.hpp"

namespace httplib {
class Client;
}

namespace cogledger::node {

// Connection-level failure (refused, timeout, bad URL).
class ClientError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HttpResult {
  int status = 0;
  std::string body;
  std::string content_type;
};

// Minimal HTTP client for the node API. Signs every request with the owner
// key when one is set, otherwise sends the bearer secret when one is set.
class NodeClient {
 public:
  explicit NodeClient(const std::string& base_url);
  ~NodeClient();
  NodeClient(NodeClient&&) noexcept;
  NodeClient& operator=(NodeClient&&) noexcept;

  void set_owner_key(KeyPair key) { owner_ = std::move(key); }
  void set_bearer(std::string secret_hex) { bearer_ = std::move(secret_hex); }

  HttpResult get(const std::string& target);
  HttpResult post(const std::string& target, const std::string& body,
                  const std::string& content_type = "application/json");

 private:
  HttpResult send(const std::string& method, const std::string& target, const std::string& body,
                  const std::string& content_type);

  std::unique_ptr<httplib::Client> client_;
  std::optional<KeyPair> owner_;
  std::optional<std::string> bearer_;
};

}  // namespace cogledger::node
