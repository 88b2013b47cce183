#include "cogledger/node/node.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cogledger/learning/codify.hpp"
#include "cogledger/learning/preference.hpp"
#include "cogledger/learning/refine.hpp"
#include "cogledger/memory/activity_json.hpp"
#include "cogledger/memory/history_csv.hpp"
#include "cogledger/node/owner_auth.hpp"
#include "cogledger/text.hpp"

namespace cogledger::node {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out.flush()) throw std::runtime_error("cannot write " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

ChainParams make_params(const NodeConfig& cfg, const KeyPair& key, const KeyPair& validator) {
  std::vector<Validator> vs;
  if (cfg.validators.empty()) {
    vs.push_back(Validator::from_key(validator.pub, 1));
  } else {
    for (const auto& v : cfg.validators) vs.push_back(Validator::from_key(v.key, v.stake));
  }
  try {
    return ChainParams{ValidatorSet(std::move(vs)), account_of(key.pub)};
  } catch (const ValidatorSetError& e) {
    throw ConfigError(std::string("invalid validator set: ") + e.what());
  }
}

std::string_view class_name(TokenClass cls) {
  switch (cls) {
    case TokenClass::FungibleIncentive: return "FungibleIncentive";
    case TokenClass::PersonalityBadge: return "PersonalityBadge";
    case TokenClass::KnowledgeObjectNft: return "KnowledgeObjectNft";
    case TokenClass::ModelNft: return "ModelNft";
  }
  return "Unknown";
}

Json token_json(const TokenId& id, const NftEntry& e) {
  Json j = {{"token_id", id.hex()},
            {"class", class_name(e.metadata.cls)},
            {"content_hash", e.metadata.content_hash.root.hex()},
            {"content_length", e.metadata.content_hash.total_len},
            {"schema_version", e.metadata.schema_version},
            {"issuer", e.metadata.issuer.hex()},
            {"owner", e.owner.hex()},
            {"minted_at", e.minted_at}};
  if (e.metadata.trait_code) j["trait_code"] = *e.metadata.trait_code;
  if (e.metadata.weight) j["weight"] = e.metadata.weight->str();
  return j;
}

Json payload_json(const learning::KnowledgeObjectPayload& p) {
  Json vocab = Json::array();
  for (const auto& t : p.vocabulary) vocab.push_back({{"term", t.term}, {"score", t.score.str()}});
  Json sources = Json::array();
  for (const auto& id : p.source_record_ids) sources.push_back(id.hex());
  return {{"schema_version", p.schema_version},
          {"stopwords_digest", p.stopwords_digest.hex()},
          {"window", {{"from", p.window_from}, {"to", p.window_to}}},
          {"vocabulary", vocab},
          {"mentions", p.mentions},
          {"source_record_ids", sources}};
}

Json header_json(const BlockHeader& h) {
  return {{"height", h.height},
          {"hash", header_hash(h).hex()},
          {"prev_hash", h.prev_hash.hex()},
          {"merkle_root", h.merkle_root.hex()},
          {"timestamp", h.timestamp},
          {"validator_id", h.validator_id.hex()}};
}

[[noreturn]] void bad_request(const std::string& message) { throw ApiError(400, "BadRequest", message); }

std::string_view learning_status_code(learning::LearningErrc code) { return learning::to_string(code); }

ApiError from_learning(const learning::LearningError& e) {
  int status = 422;
  if (e.code() == learning::LearningErrc::UnknownQuestion || e.code() == learning::LearningErrc::InvalidAnswer)
    status = 400;
  return ApiError(status, std::string(learning_status_code(e.code())), e.what());
}

ApiError from_store(const StoreError& e) {
  switch (e.code()) {
    case StoreErrc::NotFound: return ApiError(404, "NotFound", e.what());
    case StoreErrc::StorageFull: return ApiError(507, "StorageFull", e.what());
    case StoreErrc::IntegrityFailure: break;
  }
  return ApiError(500, "IntegrityFailure", e.what());
}

}  // namespace

Node::Node(NodeOptions options)
    : opts_(std::move(options)),
      key_(opts_.key),
      validator_key_(opts_.validator),
      owner_(account_of(key_.pub)),
      params_(make_params(opts_.config, key_, validator_key_)),
      data_dir_(opts_.config.data_dir),
      chain_file_(data_dir_ / "chain.dat"),
      store_((std::filesystem::create_directories(data_dir_), data_dir_ / "store"), opts_.config.store_capacity),
      quiz_(opts_.config.quiz ? learning::QuizDefinition::parse_json(read_text(*opts_.config.quiz))
                              : learning::default_quiz()) {
  if (opts_.config.gazetteer) {
    std::istringstream lines(read_text(*opts_.config.gazetteer));
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) gazetteer_.insert(line);
    }
  }

  if (chain_file_.exists()) {
    auto blocks = chain_file_.read_all();
    chain_ = std::make_unique<Chain>(Chain::replay(params_, blocks));
    log("loaded chain at height " + std::to_string(chain_->height()));
  } else {
    if (params_.validators.first().key != validator_key_.pub)
      throw ConfigError("the first configured validator must be this node's key to create the genesis block");
    Block genesis = make_genesis(params_, validator_key_);
    chain_ = std::make_unique<Chain>(params_, genesis);
    chain_file_.append(genesis);
    log("created genesis block");
  }
  load_grants();
  load_hits();
  rebuild_codified();
  publish();
  worker_ = std::thread([this] { worker_loop(); });
}

Node::~Node() {
  {
    std::lock_guard lk(queue_mu_);
    stopping_ = true;
  }
  queue_cv_.notify_all();
  if (worker_.joinable()) worker_.join();
}

std::uint64_t Node::now() const {
  if (opts_.clock) return opts_.clock();
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count());
}

void Node::log(const std::string& line) const {
  if (opts_.log) std::clog << "[cognode] " << line << "\n";
}

// ---- command queue -------------------------------------------------------

void Node::enqueue(std::function<void()> fn) {
  {
    std::lock_guard lk(queue_mu_);
    if (stopping_) throw ApiError(503, "ShuttingDown", "node is shutting down");
    if (queue_.size() >= opts_.config.queue_capacity)
      throw ApiError(503, "QueueFull", "command queue is full; retry later");
    queue_.push_back(std::move(fn));
  }
  queue_cv_.notify_one();
}

std::future<void> Node::post(std::function<void()> fn) {
  auto task = std::make_shared<std::packaged_task<void()>>(std::move(fn));
  auto result = task->get_future();
  enqueue([task] { (*task)(); });
  return result;
}

void Node::worker_loop() {
  using clock = std::chrono::steady_clock;
  const double interval = opts_.config.seal_interval_seconds;
  const auto period = std::chrono::duration_cast<clock::duration>(std::chrono::duration<double>(interval));
  auto deadline = clock::now() + period;

  std::unique_lock lk(queue_mu_);
  while (true) {
    auto ready = [&] { return stopping_ || !queue_.empty(); };
    if (interval > 0) {
      queue_cv_.wait_until(lk, deadline, ready);
    } else {
      queue_cv_.wait(lk, ready);
    }
    std::function<void()> fn;
    if (!queue_.empty()) {
      fn = std::move(queue_.front());
      queue_.pop_front();
    } else if (stopping_) {
      break;
    }
    lk.unlock();
    if (fn) fn();
    const bool due = interval > 0 && clock::now() >= deadline;
    if (due || pool_.size() >= kMaxRecordsPerBlock) {
      try {
        seal_now();
      } catch (const std::exception& e) {
        log(std::string("seal failed: ") + e.what());
      }
      if (due) deadline = clock::now() + period;
    }
    lk.lock();
  }
}

bool Node::seal_now() {
  if (pool_.empty()) return false;
  const std::uint64_t height = chain_->height() + 1;
  if (scheduled_validator(params_.validators, height) != key_id(validator_key_.pub)) return false;

  auto batch = pool_.drain(kMaxRecordsPerBlock);
  std::optional<Block> block;
  while (!batch.empty() && !block) {
    try {
      block = chain_->seal(batch, validator_key_, now());
    } catch (const ChainError& e) {
      if (e.code() != ChainErrc::RecordInvalid || !e.record_index() || *e.record_index() >= batch.size()) {
        pool_.restore_front(std::move(batch));
        throw;
      }
      log("dropping pending record: " + std::string(e.what()));
      batch.erase(batch.begin() + static_cast<std::ptrdiff_t>(*e.record_index()));
    }
  }
  if (!block) return false;
  try {
    chain_file_.append(*block);
  } catch (...) {
    pool_.restore_front(std::move(batch));
    throw;
  }
  chain_->append(*block);
  publish();
  log("sealed block " + std::to_string(block->header.height) + " with " + std::to_string(block->records.size()) +
      " records");
  return true;
}

void Node::publish() {
  auto state = std::make_shared<const LedgerState>(chain_->state());
  auto blocks = std::make_shared<const std::vector<Block>>(chain_->blocks());
  std::lock_guard lk(snap_mu_);
  snapshot_ = std::move(state);
  blocks_snapshot_ = std::move(blocks);
}

std::shared_ptr<const LedgerState> Node::snapshot() const {
  std::lock_guard lk(snap_mu_);
  return snapshot_;
}

std::vector<Block> Node::blocks() const {
  std::lock_guard lk(snap_mu_);
  return *blocks_snapshot_;
}

void Node::push_op(TokenOp op) { pool_.push(sign_op(std::move(op), key_)); }

// ---- persistence of off-chain state --------------------------------------

void Node::load_grants() {
  auto path = data_dir_ / "grants.json";
  if (!std::filesystem::exists(path)) return;
  Json doc = Json::parse(read_text(path));
  std::lock_guard lk(grants_mu_);
  for (const auto& g : doc.at("grants")) {
    GrantRecord r;
    r.grant_id = Hash32::from_hex(g.at("grant_id").get<std::string>());
    r.shell_id = Hash32::from_hex(g.at("shell_id").get<std::string>());
    r.display_name = g.at("display_name").get<std::string>();
    r.scopes = g.at("scopes").get<std::vector<std::string>>();
    r.autonomy_level = g.at("autonomy_level").get<std::uint64_t>();
    const std::string status = g.at("status").get<std::string>();
    r.status = status == "approved" ? GrantStatus::Approved
               : status == "revoked" ? GrantStatus::Revoked
                                     : GrantStatus::Pending;
    r.created_at = g.at("created_at").get<std::uint64_t>();
    if (g.contains("secret_hash")) {
      r.secret_hash = Hash32::from_hex(g.at("secret_hash").get<std::string>());
      grant_by_secret_[*r.secret_hash] = r.grant_id;
    }
    grants_[r.grant_id] = std::move(r);
  }
}

// Caller holds grants_mu_.
void Node::save_grants() const {
  Json list = Json::array();
  for (const auto& [id, g] : grants_) {
    Json j = {{"grant_id", g.grant_id.hex()},
              {"shell_id", g.shell_id.hex()},
              {"display_name", g.display_name},
              {"scopes", g.scopes},
              {"autonomy_level", g.autonomy_level},
              {"status", to_string(g.status)},
              {"created_at", g.created_at}};
    if (g.secret_hash) j["secret_hash"] = g.secret_hash->hex();
    list.push_back(std::move(j));
  }
  write_text_atomic(data_dir_ / "grants.json", Json{{"grants", list}}.dump(2));
}

void Node::load_hits() {
  auto path = data_dir_ / "hits.json";
  if (!std::filesystem::exists(path)) return;
  Json doc = Json::parse(read_text(path));
  for (const auto& [hex, count] : doc.items()) hits_[TokenId::from_hex(hex)] = count.get<std::uint64_t>();
}

void Node::save_hits() const {
  Json doc = Json::object();
  for (const auto& [id, count] : hits_)
    if (count > 0) doc[id.hex()] = count;
  write_text_atomic(data_dir_ / "hits.json", doc.dump(2));
}

void Node::rebuild_codified() {
  for (const auto& [id, entry] : chain_->state().registry.nfts) {
    if (entry.metadata.cls != TokenClass::KnowledgeObjectNft) continue;
    try {
      auto payload = learning::decode_payload(store_.get(entry.metadata.content_hash));
      codified_.insert(payload.source_record_ids.begin(), payload.source_record_ids.end());
    } catch (const std::exception& e) {
      log("knowledge object " + id.hex() + " payload unavailable: " + e.what());
    }
  }
}

// ---- authorization -------------------------------------------------------

Caller Node::authorize_bearer(std::string_view secret_hex, std::string_view scope) const {
  Bytes secret;
  try {
    secret = from_hex(secret_hex);
  } catch (const std::invalid_argument&) {
    throw ApiError(401, "Unauthenticated", "malformed bearer token");
  }
  const Hash32 h = sha256(secret);
  std::lock_guard lk(grants_mu_);
  auto it = grant_by_secret_.find(h);
  if (it == grant_by_secret_.end()) throw ApiError(401, "Unauthenticated", "unknown bearer token");
  const GrantRecord& g = grants_.at(it->second);
  if (g.status != GrantStatus::Approved) throw ApiError(403, "Forbidden", "grant is not active");
  if (!scope.empty() && std::find(g.scopes.begin(), g.scopes.end(), scope) == g.scopes.end())
    throw ApiError(403, "Forbidden", "grant lacks scope " + std::string(scope));
  return Caller{false, g.grant_id, g.shell_id};
}

Caller Node::authorize_owner(std::string_view method, std::string_view path, std::string_view body,
                             std::string_view timestamp, std::string_view signature_hex) const {
  std::uint64_t ts = 0;
  try {
    std::size_t used = 0;
    ts = std::stoull(std::string(timestamp), &used);
    if (used != timestamp.size()) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw ApiError(401, "Unauthenticated", "malformed owner timestamp");
  }
  if (!verify_owner_request(key_.pub, method, path, ts, body, signature_hex, now()))
    throw ApiError(401, "Unauthenticated", "owner signature rejected");
  return Caller{true, {}, {}};
}

// ---- grants --------------------------------------------------------------

Json Node::grant_json(const GrantRecord& g) const {
  return {{"grant_id", g.grant_id.hex()},
          {"shell_id", g.shell_id.hex()},
          {"display_name", g.display_name},
          {"scopes", g.scopes},
          {"autonomy_level", g.autonomy_level},
          {"status", to_string(g.status)},
          {"created_at", g.created_at}};
}

Json Node::register_shell(const Json& body) {
  if (!body.is_object()) bad_request("body must be a JSON object");
  GrantRecord g;
  auto name = body.find("display_name");
  if (name == body.end() || !name->is_string() || name->get<std::string>().empty())
    bad_request("display_name is required");
  g.display_name = name->get<std::string>();
  if (g.display_name.size() > 256) bad_request("display_name exceeds 256 bytes");
  auto scopes = body.find("scopes");
  if (scopes == body.end() || !scopes->is_array() || scopes->empty()) bad_request("scopes must be a non-empty array");
  for (const auto& s : *scopes) {
    if (!s.is_string() || !known_scopes().contains(s.get<std::string>()))
      bad_request("unknown scope " + s.dump());
    if (std::find(g.scopes.begin(), g.scopes.end(), s.get<std::string>()) == g.scopes.end())
      g.scopes.push_back(s.get<std::string>());
  }
  if (auto lvl = body.find("autonomy_level"); lvl != body.end()) {
    if (!lvl->is_number_integer() || lvl->get<std::int64_t>() < 0 ||
        lvl->get<std::int64_t>() > static_cast<std::int64_t>(kMaxAutonomyLevel))
      bad_request("autonomy_level must be an integer in [0, 4]");
    g.autonomy_level = lvl->get<std::uint64_t>();
  }
  std::optional<Hash32> shell_id;
  if (auto sid = body.find("shell_id"); sid != body.end()) {
    try {
      shell_id = Hash32::from_hex(sid->get<std::string>());
    } catch (const std::exception&) {
      bad_request("shell_id must be 64 hex characters");
    }
  }

  return execute([&] {
    std::lock_guard lk(grants_mu_);
    if (shell_id) {
      for (const auto& [id, existing] : grants_)
        if (existing.shell_id == *shell_id) throw ApiError(409, "DuplicateShell", "shell_id is already registered");
      g.shell_id = *shell_id;
    } else {
      random_bytes(g.shell_id.bytes);
    }
    random_bytes(g.grant_id.bytes);
    g.created_at = now();
    pool_.push(GrantEvent{GrantEventKind::Requested, g.grant_id, g.shell_id, g.display_name, g.scopes,
                          g.autonomy_level, g.created_at});
    grants_[g.grant_id] = g;
    save_grants();
    log("shell registration pending: grant " + g.grant_id.hex());
    return grant_json(g);
  });
}

Json Node::list_grants(bool pending_only) const {
  std::lock_guard lk(grants_mu_);
  Json out = Json::array();
  for (const auto& [id, g] : grants_)
    if (!pending_only || g.status == GrantStatus::Pending) out.push_back(grant_json(g));
  return {{"grants", out}};
}

Json Node::approve_grant(const Hash32& grant_id) {
  return execute([&] {
    std::lock_guard lk(grants_mu_);
    auto it = grants_.find(grant_id);
    if (it == grants_.end()) throw ApiError(404, "NotFound", "unknown grant");
    GrantRecord& g = it->second;
    if (g.status != GrantStatus::Pending) throw ApiError(409, "GrantNotPending", "grant is not pending");
    Hash32 secret;
    random_bytes(secret.bytes);
    const Hash32 secret_hash = sha256(secret.view());
    pool_.push(GrantEvent{GrantEventKind::Approved, g.grant_id, g.shell_id, g.display_name, g.scopes,
                          g.autonomy_level, now()});
    g.status = GrantStatus::Approved;
    g.secret_hash = secret_hash;
    grant_by_secret_[secret_hash] = g.grant_id;
    save_grants();
    log("grant approved: " + g.grant_id.hex());
    Json out = grant_json(g);
    out["secret"] = secret.hex();
    return out;
  });
}

Json Node::revoke_grant(const Hash32& grant_id) {
  return execute([&] {
    std::lock_guard lk(grants_mu_);
    auto it = grants_.find(grant_id);
    if (it == grants_.end()) throw ApiError(404, "NotFound", "unknown grant");
    GrantRecord& g = it->second;
    if (g.status == GrantStatus::Revoked) throw ApiError(409, "GrantRevoked", "grant is already revoked");
    pool_.push(GrantEvent{GrantEventKind::Revoked, g.grant_id, g.shell_id, g.display_name, g.scopes,
                          g.autonomy_level, now()});
    g.status = GrantStatus::Revoked;
    save_grants();
    log("grant revoked: " + g.grant_id.hex());
    return grant_json(g);
  });
}

// ---- activities ----------------------------------------------------------

Json Node::submit_activity(const Caller& caller, const Json& body) {
  return execute([&] {
    ActivityRecord record;
    try {
      record = activity_from_json(body, owner_, caller.shell_id, now());
      pool_.ingest(record, chain_->state().memory);
    } catch (const PoolError& e) {
      if (e.code() == PoolErrc::Duplicate) throw ApiError(409, "DuplicateRecord", e.what());
      throw ApiError(400, "ValidationFailed", e.what());
    }
    return Json{{"record_id", record.record_id.hex()}, {"status", "pending"}};
  });
}

Json Node::import_history(const Caller& caller, std::string_view csv) {
  HistoryImport parsed;
  try {
    parsed = import_history_csv(csv, owner_, caller.shell_id);
  } catch (const BadHeader& e) {
    throw ApiError(400, "BadHeader", e.what());
  } catch (const std::invalid_argument& e) {
    throw ApiError(400, "BadRequest", e.what());
  }
  return execute([&] {
    Json ids = Json::array();
    std::size_t duplicates = 0;
    for (const auto& r : parsed.records) {
      try {
        pool_.ingest(r, chain_->state().memory);
        ids.push_back(r.record_id.hex());
      } catch (const PoolError& e) {
        if (e.code() != PoolErrc::Duplicate) throw;
        ++duplicates;
      }
    }
    Json errors = Json::array();
    for (const auto& e : parsed.errors) errors.push_back({{"row", e.row}, {"reason", e.reason}});
    return Json{{"imported", ids.size()}, {"duplicates", duplicates}, {"record_ids", ids}, {"errors", errors}};
  });
}

Json Node::query_records(const QueryFilter& filter, std::optional<std::size_t> limit) const {
  auto state = snapshot();
  auto records = state->memory.query(filter);
  if (limit && records.size() > *limit) records.resize(*limit);
  Json out = Json::array();
  for (const auto& r : records) out.push_back(activity_to_json(r));
  return {{"records", out}, {"count", out.size()}};
}

// ---- assets and knowledge ------------------------------------------------

Json Node::assets() const {
  auto state = snapshot();
  AssetView view = assets_of(state->registry, owner_);
  Json groups = {{"badges", Json::array()}, {"knowledge", Json::array()}, {"models", Json::array()}};
  for (const auto& group : view.groups) {
    const char* key = group.cls == TokenClass::PersonalityBadge     ? "badges"
                      : group.cls == TokenClass::KnowledgeObjectNft ? "knowledge"
                                                                    : "models";
    for (const auto& [id, entry] : group.items) groups[key].push_back(token_json(id, entry));
  }
  return {{"owner", owner_.hex()}, {"cog_balance", view.balance}, {"groups", groups}};
}

std::pair<Json, Bytes> Node::knowledge(const TokenId& id) {
  auto state = snapshot();
  const NftEntry* entry = state->registry.find(id);
  if (!entry || !entry->alive || entry->metadata.cls != TokenClass::KnowledgeObjectNft)
    throw ApiError(404, "UnknownToken", "no live knowledge object " + id.hex());
  Bytes bytes;
  try {
    bytes = store_.get(entry->metadata.content_hash);
  } catch (const StoreError& e) {
    throw from_store(e);
  }
  Json out = token_json(id, *entry);
  try {
    out["payload"] = payload_json(learning::decode_payload(bytes));
  } catch (const learning::LearningError& e) {
    throw ApiError(500, "BadPayload", e.what());
  }
  out["payload_hex"] = to_hex(bytes);
  execute([&] {
    ++hits_[id];
    save_hits();
  });
  return {std::move(out), std::move(bytes)};
}

std::uint64_t Node::hit_count(const TokenId& id) {
  return execute([&] {
    auto it = hits_.find(id);
    return it == hits_.end() ? std::uint64_t{0} : it->second;
  });
}

// ---- quiz ----------------------------------------------------------------

Json Node::quiz() const {
  Json doc = Json::parse(quiz_.to_json());
  doc["digest"] = quiz_.digest().hex();
  return doc;
}

Json Node::answer_quiz(const Caller& caller, const Json& body) {
  if (!body.is_object() || !body.contains("answers") || !body["answers"].is_object())
    bad_request("body must be {\"answers\": {question_id: value}}");
  std::map<std::string, int> answers;
  for (const auto& [id, value] : body["answers"].items()) {
    if (!value.is_number_integer()) bad_request("answer for '" + id + "' must be an integer");
    auto v = value.get<std::int64_t>();
    answers[id] = static_cast<int>(std::clamp<std::int64_t>(v, -1000, 1000));
  }
  learning::TraitResult result;
  try {
    result = learning::score_quiz(quiz_, answers);
  } catch (const learning::LearningError& e) {
    throw from_learning(e);
  }

  return execute([&] {
    const std::uint64_t at = now();
    std::vector<ActivityRecord> records;
    for (const auto& [id, value] : answers) {
      ActivityRecord r;
      r.actor = owner_;
      r.kind = ActivityKind::QuizAnswer;
      r.question_id = id;
      r.answer_value = value;
      r.shell_id = caller.shell_id;
      r.captured_at = at;
      records.push_back(with_record_id(std::move(r)));
    }
    for (const auto& r : records)
      if (pool_.contains_activity(r.record_id) || chain_->state().memory.contains(r.record_id))
        throw ApiError(409, "DuplicateRecord", "these answers were already recorded");
    Json ids = Json::array();
    for (const auto& r : records) {
      pool_.ingest(r, chain_->state().memory);
      ids.push_back(r.record_id.hex());
    }

    Json axis = Json::object();
    for (std::size_t i = 0; i < 4; ++i)
      axis[std::string(learning::to_string(static_cast<learning::Axis>(i)))] = result.axis_scores[i];
    Json out = {{"code", result.code}, {"axis_scores", axis}, {"record_ids", ids}};

    if (answers.size() == quiz_.questions.size()) {
      Json evidence = {{"quiz_digest", quiz_.digest().hex()},
                       {"answers", answers},
                       {"axis_scores", axis},
                       {"code", result.code},
                       {"answered_at", at},
                       {"record_ids", ids}};
      ContentAddress addr;
      try {
        addr = store_.put(as_bytes(evidence.dump()));
      } catch (const StoreError& e) {
        throw from_store(e);
      }
      NftMetadata meta;
      meta.cls = TokenClass::PersonalityBadge;
      meta.content_hash = addr;
      meta.schema_version = 1;
      meta.trait_code = result.code;
      meta.issuer = owner_;
      MintNft mint = with_token_id(MintNft{{}, meta, owner_});
      out["badge_token_id"] = mint.token_id.hex();
      push_op(mint);
    }
    return out;
  });
}

// ---- model ---------------------------------------------------------------

Json Node::salience(std::string_view text) const {
  auto state = snapshot();
  const TokenId* latest = nullptr;
  const NftEntry* latest_entry = nullptr;
  for (const auto& [id, entry] : state->registry.nfts) {
    if (!entry.alive || entry.metadata.cls != TokenClass::ModelNft || entry.owner != owner_) continue;
    if (!latest_entry || entry.minted_at > latest_entry->minted_at) {
      latest = &id;
      latest_entry = &entry;
    }
  }
  if (!latest) throw ApiError(404, "NoModel", "no preference model has been trained");
  learning::PreferenceModel model;
  try {
    model = learning::decode_model(store_.get(latest_entry->metadata.content_hash));
  } catch (const StoreError& e) {
    throw from_store(e);
  } catch (const learning::LearningError& e) {
    throw ApiError(500, "BadPayload", e.what());
  }
  return {{"score", learning::predict_salience(model, text)}, {"model_token_id", latest->hex()}};
}

// ---- admin passes --------------------------------------------------------

Json Node::codify(const Json& body) {
  QueryFilter filter;
  std::size_t k = opts_.config.codify_k;
  if (!body.is_null()) {
    if (!body.is_object()) bad_request("body must be a JSON object");
    try {
      if (body.contains("from")) filter.from = body["from"].get<std::uint64_t>();
      if (body.contains("to")) filter.to = body["to"].get<std::uint64_t>();
      if (body.contains("k")) k = body["k"].get<std::size_t>();
    } catch (const nlohmann::json::exception&) {
      bad_request("from, to and k must be non-negative integers");
    }
    if (k == 0) bad_request("k must be positive");
  }

  return execute([&] {
    seal_now();
    std::vector<ActivityRecord> window;
    for (auto& r : chain_->state().memory.query(filter)) {
      if (r.kind != ActivityKind::PageVisit && r.kind != ActivityKind::Search && r.kind != ActivityKind::Bookmark)
        continue;
      if (r.actor != owner_ || codified_.contains(r.record_id)) continue;
      window.push_back(std::move(r));
    }
    learning::Codification c;
    try {
      learning::CodifyOptions options{k, gazetteer_, opts_.config.reward};
      c = learning::codify(window, owner_, store_, chain_->state().registry, options);
    } catch (const learning::LearningError& e) {
      throw from_learning(e);
    } catch (const StoreError& e) {
      throw from_store(e);
    }
    push_op(c.mint);
    push_op(c.incentive);
    bool sealed = seal_now();
    for (const auto& id : c.payload.source_record_ids) codified_.insert(id);
    log("codified " + std::to_string(window.size()) + " records into " + c.mint.token_id.hex());
    return Json{{"token_id", c.mint.token_id.hex()},
                {"content_hash", c.address.root.hex()},
                {"content_length", c.address.total_len},
                {"reward", opts_.config.reward},
                {"records", window.size()},
                {"payload", payload_json(c.payload)},
                {"sealed", sealed}};
  });
}

Json Node::refine() {
  return execute([&] {
    seal_now();
    const auto& registry = chain_->state().registry;
    std::vector<learning::RefineInput> inputs;
    for (const auto& [id, entry] : registry.nfts) {
      if (!entry.alive || entry.metadata.cls != TokenClass::KnowledgeObjectNft) continue;
      auto h = hits_.find(id);
      inputs.push_back({id, entry.metadata.weight.value_or(Fixed6{}), entry.minted_at,
                        h == hits_.end() ? 0 : h->second});
    }
    const std::uint64_t at = now();
    auto result = learning::refine(inputs, at, opts_.config.refine);
    std::uint64_t max_hits = 0;
    for (const auto& in : inputs) max_hits = std::max(max_hits, in.hit_count);

    Json batch = Json::array();
    for (const auto& in : inputs) {
      double w = learning::refined_weight(in.hit_count, max_hits, in.mint_time, at, opts_.config.refine);
      batch.push_back({{"token_id", in.token_id.hex()},
                       {"hit_count", in.hit_count},
                       {"old_weight", in.weight.str()},
                       {"new_weight", Fixed6::from_double(w).str()}});
    }
    Json updates = Json::array();
    for (const auto& u : result.updates) {
      updates.push_back({{"token_id", u.token_id.hex()}, {"weight", u.new_weight.str()}});
      push_op(u);
    }
    Json burns = Json::array();
    for (const auto& b : result.burns) {
      burns.push_back(b.token_id.hex());
      push_op(b);
    }
    bool sealed = seal_now();
    for (const auto& in : inputs) hits_.erase(in.token_id);
    save_hits();
    return Json{{"now", at}, {"inputs", batch}, {"updates", updates}, {"burns", burns}, {"sealed", sealed}};
  });
}

Json Node::train() {
  return execute([&] {
    seal_now();
    const auto& registry = chain_->state().registry;
    std::vector<learning::TrainingObject> objects;
    for (const auto& [id, entry] : registry.nfts) {
      if (!entry.alive || entry.metadata.cls != TokenClass::KnowledgeObjectNft || entry.owner != owner_) continue;
      try {
        objects.push_back({id, learning::decode_payload(store_.get(entry.metadata.content_hash)),
                           entry.metadata.weight.value_or(Fixed6{})});
      } catch (const std::exception& e) {
        log("skipping knowledge object " + id.hex() + ": " + e.what());
      }
    }
    learning::Training t;
    try {
      t = learning::train_preference_model(objects, owner_, owner_, store_);
    } catch (const learning::LearningError& e) {
      throw from_learning(e);
    } catch (const StoreError& e) {
      throw from_store(e);
    }
    bool minted = false;
    bool sealed = false;
    // An identical model was minted before; token ids are content derived.
    if (!registry.find(t.mint.token_id)) {
      push_op(t.mint);
      minted = true;
      sealed = seal_now();
    }
    Json built = Json::array();
    for (const auto& id : t.model.built_from) built.push_back(id.hex());
    Json weights = Json::array();
    for (const auto& [term, w] : t.model.weights) weights.push_back({{"term", term}, {"weight", w.str()}});
    return Json{{"token_id", t.mint.token_id.hex()},
                {"content_hash", t.address.root.hex()},
                {"built_from", built},
                {"weights", weights},
                {"minted", minted},
                {"sealed", sealed}};
  });
}

Json Node::burn(const TokenId& id) {
  return execute([&] {
    seal_now();
    const NftEntry* entry = chain_->state().registry.find(id);
    if (!entry || !entry->alive) throw ApiError(404, "UnknownToken", "no live token " + id.hex());
    push_op(Burn{id, static_cast<std::uint64_t>(BurnReason::OwnerRequest)});
    bool sealed = seal_now();
    return Json{{"token_id", id.hex()}, {"burned", true}, {"sealed", sealed}};
  });
}

Json Node::seal() {
  return execute([&] {
    bool sealed = seal_now();
    return Json{{"sealed", sealed}, {"height", chain_->height()}, {"pending", pool_.size()}};
  });
}

Json Node::head() const {
  auto state = snapshot();
  Json out = header_json(state->head);
  out["pending"] = pool_.size();
  return out;
}

Hash32 Node::state_digest() {
  return execute([&] {
    Sha256 h;
    h.update(chain_->state().digest());
    for (const auto& r : pool_.snapshot()) h.update(sha256(canonical_encode(r)));
    return h.finish();
  });
}

}  // namespace cogledger::node
