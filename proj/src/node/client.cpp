#include "cogledger/node/client.hpp"

#include <httplib.h>

#include <chrono>

#include "cogledger/node/owner_auth.hpp"

namespace cogledger::node {

NodeClient::NodeClient(const std::string& base_url) {
  client_ = std::make_unique<httplib::Client>(base_url);
  if (!client_->is_valid()) throw ClientError("invalid node URL " + base_url);
  client_->set_connection_timeout(5);
  client_->set_read_timeout(60);
}

NodeClient::~NodeClient() = default;
NodeClient::NodeClient(NodeClient&&) noexcept = default;
NodeClient& NodeClient::operator=(NodeClient&&) noexcept = default;

HttpResult NodeClient::get(const std::string& target) { return send("GET", target, "", ""); }

HttpResult NodeClient::post(const std::string& target, const std::string& body, const std::string& content_type) {
  return send("POST", target, body, content_type);
}

HttpResult NodeClient::send(const std::string& method, const std::string& target, const std::string& body,
                            const std::string& content_type) {
  httplib::Headers headers;
  if (owner_) {
    const std::string path = target.substr(0, target.find('?'));
    const auto ts = static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
            .count());
    headers.emplace(kOwnerTimestampHeader, std::to_string(ts));
    headers.emplace(kOwnerSignatureHeader, sign_owner_request(*owner_, method, path, ts, body));
  } else if (bearer_) {
    headers.emplace("Authorization", "Bearer " + *bearer_);
  }
  httplib::Result res = method == "GET" ? client_->Get(target, headers)
                                        : client_->Post(target, headers, body, content_type.c_str());
  if (!res) throw ClientError("cannot reach node: " + httplib::to_string(res.error()));
  return HttpResult{res->status, res->body, res->get_header_value("Content-Type")};
}

}  // namespace cogledger::node
