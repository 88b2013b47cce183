#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <future>
#include <json.hpp>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "cogledger/core/chain.hpp"
#include "cogledger/core/chain_file.hpp"
#include "cogledger/learning/quiz.hpp"
#include "cogledger/memory/pool.hpp"
#include "cogledger/node/config.hpp"
#include "cogledger/store/content_store.hpp"

namespace cogledger::node {

using Json = nlohmann::json;

// An error that maps directly onto an HTTP status and {code, message} body.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

// Who is calling: the owner (all scopes) or a shell through an approved grant.
struct Caller {
  bool owner = false;
  Hash32 grant_id;
  Hash32 shell_id;  // zero for the owner
};

// Off-chain side of a capability grant. Only the SHA-256 of the secret is kept.
struct GrantRecord {
  Hash32 grant_id;
  Hash32 shell_id;
  std::string display_name;
  std::vector<std::string> scopes;
  std::uint64_t autonomy_level = 0;
  GrantStatus status = GrantStatus::Pending;
  std::uint64_t created_at = 0;
  std::optional<Hash32> secret_hash;
};

struct NodeOptions {
  NodeConfig config;
  KeyPair key;        // owner account key: signs token ops, authenticates owner requests
  KeyPair validator;  // signs blocks
  std::function<std::uint64_t()> clock;  // unix seconds; system clock when empty
  bool log = true;                       // operational log lines on stderr
};

// The live node. Every state change runs on one worker thread in queue order;
// reads use the last sealed LedgerState snapshot.
class Node {
 public:
  explicit Node(NodeOptions options);
  ~Node();
  Node(const Node&) = delete;
  Node& operator=(const Node&) = delete;

  const PublicKey& owner_key() const { return key_.pub; }
  const AccountId& owner_account() const { return owner_; }
  std::uint64_t now() const;

  // Authorization. Throws ApiError 401 Unauthenticated / 403 Forbidden. An
  // empty scope only checks that the token belongs to an approved grant.
  Caller authorize_bearer(std::string_view secret_hex, std::string_view scope) const;
  Caller authorize_owner(std::string_view method, std::string_view path, std::string_view body,
                         std::string_view timestamp, std::string_view signature_hex) const;

  // Routes. Each returns the JSON response body; errors are ApiError.
  Json register_shell(const Json& body);
  Json list_grants(bool pending_only) const;
  Json approve_grant(const Hash32& grant_id);
  Json revoke_grant(const Hash32& grant_id);
  Json submit_activity(const Caller& caller, const Json& body);
  Json import_history(const Caller& caller, std::string_view csv);
  Json query_records(const QueryFilter& filter, std::optional<std::size_t> limit) const;
  Json assets() const;
  // Payload bytes of a live knowledge object; counts one hit.
  std::pair<Json, Bytes> knowledge(const TokenId& id);
  Json quiz() const;
  Json answer_quiz(const Caller& caller, const Json& body);
  Json salience(std::string_view text) const;
  Json codify(const Json& body);
  Json refine();
  Json train();
  Json burn(const TokenId& id);
  Json seal();
  Json head() const;

  // Introspection for tests and tools.
  std::shared_ptr<const LedgerState> snapshot() const;
  std::vector<Block> blocks() const;
  std::size_t pending_count() const { return pool_.size(); }
  std::uint64_t hit_count(const TokenId& id);
  Hash32 state_digest();
  const ChainParams& params() const { return params_; }

  // Runs `fn` on the worker thread after everything queued before it.
  // Throws ApiError 503 QueueFull when the queue is at capacity.
  template <class F>
  auto execute(F&& fn) -> decltype(fn()) {
    using R = decltype(fn());
    auto task = std::make_shared<std::packaged_task<R()>>(std::forward<F>(fn));
    auto result = task->get_future();
    enqueue([task] { (*task)(); });
    return result.get();
  }
  // Fire-and-forget variant; the future reports completion.
  std::future<void> post(std::function<void()> fn);

 private:
  void enqueue(std::function<void()> fn);
  void worker_loop();
  bool seal_now();
  void publish();
  void log(const std::string& line) const;

  void push_op(TokenOp op);
  void load_grants();
  void save_grants() const;
  void load_hits();
  void save_hits() const;
  void rebuild_codified();
  Json grant_json(const GrantRecord& g) const;

  NodeOptions opts_;
  KeyPair key_;
  KeyPair validator_key_;
  AccountId owner_;
  ChainParams params_;
  std::filesystem::path data_dir_;
  ChainFile chain_file_;
  std::unique_ptr<Chain> chain_;  // worker thread only
  mutable ContentStore store_;
  MemoryPool pool_;
  learning::QuizDefinition quiz_;
  std::set<std::string> gazetteer_;

  mutable std::mutex snap_mu_;
  std::shared_ptr<const LedgerState> snapshot_;
  std::shared_ptr<const std::vector<Block>> blocks_snapshot_;

  mutable std::mutex grants_mu_;
  std::map<Hash32, GrantRecord> grants_;
  std::map<Hash32, Hash32> grant_by_secret_;  // sha256(secret) -> grant id

  std::map<TokenId, std::uint64_t> hits_;  // worker thread only
  std::set<Hash32> codified_;              // worker thread only

  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::deque<std::function<void()>> queue_;
  bool stopping_ = false;
  std::thread worker_;
};

}  // namespace cogledger::node
