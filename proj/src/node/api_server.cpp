#include "cogledger/node/api_server.hpp"

#include <httplib.h>

#include "cogledger/node/owner_auth.hpp"

namespace cogledger::node {

namespace {

using httplib::Request;
using httplib::Response;

void send_json(Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(Response& res, int status, std::string_view code, std::string_view message) {
  send_json(res, status, {{"code", code}, {"message", message}});
}

Json parse_body(const Request& req, bool allow_empty = false) {
  if (req.body.empty()) {
    if (allow_empty) return Json();
    throw ApiError(400, "BadRequest", "request body is required");
  }
  try {
    return Json::parse(req.body);
  } catch (const Json::exception&) {
    throw ApiError(400, "BadRequest", "request body is not valid JSON");
  }
}

template <class T>
T parse_hex_id(const std::string& hex) {
  try {
    return T::from_hex(hex);
  } catch (const std::invalid_argument&) {
    throw ApiError(400, "BadRequest", "identifier must be 64 lowercase hex characters");
  }
}

std::uint64_t parse_u64(const std::string& name, const std::string& value) {
  try {
    std::size_t used = 0;
    if (value.empty() || value[0] == '-') throw std::invalid_argument("negative");
    auto v = std::stoull(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ApiError(400, "BadRequest", name + " must be a non-negative integer");
  }
}

}  // namespace

ApiServer::ApiServer(Node& node) : node_(node), server_(std::make_unique<httplib::Server>()) { install_routes(); }

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

void ApiServer::serve() { server_->listen_after_bind(); }

void ApiServer::start() {
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void ApiServer::stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

void ApiServer::install_routes() {
  auto& s = *server_;
  Node& node = node_;

  // nullptr scope: owner only.
  auto authorize = [&node](const Request& req, const char* scope) -> Caller {
    if (req.has_header(kOwnerSignatureHeader)) {
      return node.authorize_owner(req.method, req.path, req.body, req.get_header_value(kOwnerTimestampHeader),
                                  req.get_header_value(kOwnerSignatureHeader));
    }
    const std::string auth = req.get_header_value("Authorization");
    if (auth.empty()) throw ApiError(401, "Unauthenticated", "credentials required");
    constexpr std::string_view kBearer = "Bearer ";
    if (auth.compare(0, kBearer.size(), kBearer) != 0)
      throw ApiError(401, "Unauthenticated", "unsupported authorization scheme");
    Caller caller = node.authorize_bearer(std::string_view(auth).substr(kBearer.size()), scope ? scope : "");
    if (!scope) throw ApiError(403, "Forbidden", "owner signature required");
    return caller;
  };

  auto guarded = [](auto fn) {
    return [fn](const Request& req, Response& res) {
      try {
        fn(req, res);
      } catch (const ApiError& e) {
        send_error(res, e.status(), e.code(), e.what());
      } catch (const Json::exception& e) {
        send_error(res, 400, "BadRequest", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "Internal", e.what());
      }
    };
  };

  s.Post("/shells/register", guarded([&node](const Request& req, Response& res) {
           send_json(res, 201, node.register_shell(parse_body(req)));
         }));

  s.Get("/grants/pending", guarded([&node, authorize](const Request& req, Response& res) {
          authorize(req, nullptr);
          send_json(res, 200, node.list_grants(true));
        }));
  s.Get("/grants", guarded([&node, authorize](const Request& req, Response& res) {
          authorize(req, nullptr);
          send_json(res, 200, node.list_grants(false));
        }));
  s.Post(R"(/grants/([^/]+)/approve)", guarded([&node, authorize](const Request& req, Response& res) {
           authorize(req, nullptr);
           send_json(res, 200, node.approve_grant(parse_hex_id<Hash32>(req.matches[1])));
         }));
  s.Post(R"(/grants/([^/]+)/revoke)", guarded([&node, authorize](const Request& req, Response& res) {
           authorize(req, nullptr);
           send_json(res, 200, node.revoke_grant(parse_hex_id<Hash32>(req.matches[1])));
         }));

  s.Post("/activities", guarded([&node, authorize](const Request& req, Response& res) {
           Caller caller = authorize(req, "submit_activity");
           send_json(res, 201, node.submit_activity(caller, parse_body(req)));
         }));
  s.Post("/activities/import", guarded([&node, authorize](const Request& req, Response& res) {
           Caller caller = authorize(req, "submit_activity");
           send_json(res, 200, node.import_history(caller, req.body));
         }));
  s.Get("/records", guarded([&node, authorize](const Request& req, Response& res) {
          authorize(req, "read_knowledge");
          QueryFilter filter;
          std::optional<std::size_t> limit;
          if (req.has_param("from")) filter.from = parse_u64("from", req.get_param_value("from"));
          if (req.has_param("to")) filter.to = parse_u64("to", req.get_param_value("to"));
          if (req.has_param("kind")) {
            auto kind = parse_activity_kind(req.get_param_value("kind"));
            if (!kind) throw ApiError(400, "BadRequest", "unknown activity kind");
            filter.kind = kind;
          }
          if (req.has_param("token")) filter.token = req.get_param_value("token");
          if (req.has_param("limit")) limit = parse_u64("limit", req.get_param_value("limit"));
          send_json(res, 200, node.query_records(filter, limit));
        }));

  s.Get("/assets", guarded([&node, authorize](const Request& req, Response& res) {
          authorize(req, "read_assets");
          send_json(res, 200, node.assets());
        }));
  s.Get(R"(/knowledge/([^/]+))", guarded([&node, authorize](const Request& req, Response& res) {
          authorize(req, "read_knowledge");
          auto [doc, bytes] = node.knowledge(parse_hex_id<TokenId>(req.matches[1]));
          if (req.get_param_value("format") == "raw") {
            res.status = 200;
            res.set_content(std::string(bytes.begin(), bytes.end()), "application/octet-stream");
          } else {
            send_json(res, 200, doc);
          }
        }));

  s.Get("/quiz", guarded([&node, authorize](const Request& req, Response& res) {
          authorize(req, "take_quiz");
          send_json(res, 200, node.quiz());
        }));
  s.Post("/quiz/answers", guarded([&node, authorize](const Request& req, Response& res) {
           Caller caller = authorize(req, "take_quiz");
           send_json(res, 201, node.answer_quiz(caller, parse_body(req)));
         }));

  s.Post("/model/salience", guarded([&node, authorize](const Request& req, Response& res) {
           authorize(req, "query_model");
           std::string text = req.body;
           if (req.get_header_value("Content-Type").rfind("application/json", 0) == 0) {
             Json body = parse_body(req);
             if (!body.is_object() || !body.contains("text") || !body["text"].is_string())
               throw ApiError(400, "BadRequest", "body must be {\"text\": string}");
             text = body["text"].get<std::string>();
           }
           send_json(res, 200, node.salience(text));
         }));

  s.Post("/admin/codify", guarded([&node, authorize](const Request& req, Response& res) {
           authorize(req, nullptr);
           send_json(res, 201, node.codify(parse_body(req, true)));
         }));
  s.Post("/admin/refine", guarded([&node, authorize](const Request& req, Response& res) {
           authorize(req, nullptr);
           send_json(res, 200, node.refine());
         }));
  s.Post("/admin/train", guarded([&node, authorize](const Request& req, Response& res) {
           authorize(req, nullptr);
           send_json(res, 201, node.train());
         }));
  s.Post(R"(/admin/burn/([^/]+))", guarded([&node, authorize](const Request& req, Response& res) {
           authorize(req, nullptr);
           send_json(res, 200, node.burn(parse_hex_id<TokenId>(req.matches[1])));
         }));
  s.Post("/admin/seal", guarded([&node, authorize](const Request& req, Response& res) {
           authorize(req, nullptr);
           send_json(res, 200, node.seal());
         }));

  s.Get("/chain/head", guarded([&node](const Request&, Response& res) { send_json(res, 200, node.head()); }));

  s.set_error_handler([](const Request&, Response& res) {
    if (res.body.empty()) {
      if (res.status == 404) {
        send_error(res, 404, "NotFound", "no such route");
      } else {
        send_error(res, res.status, "HttpError", httplib::status_message(res.status));
      }
    }
  });
}

}  // namespace cogledger::node
