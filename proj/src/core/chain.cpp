#include "cogledger/core/chain.hpp"

#include <algorithm>
#include <sstream>

#include "cogledger/core/merkle.hpp"
#include "cogledger/overloaded.hpp"

namespace cogledger {

std::string_view to_string(GrantStatus status) {
  switch (status) {
    case GrantStatus::Pending: return "pending";
    case GrantStatus::Approved: return "approved";
    case GrantStatus::Revoked: return "revoked";
  }
  return "unknown";
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::Genesis: return "genesis";
    case ViolationKind::Height: return "height";
    case ViolationKind::Linkage: return "linkage";
    case ViolationKind::MerkleRoot: return "merkle-root";
    case ViolationKind::Timestamp: return "timestamp";
    case ViolationKind::Schedule: return "schedule";
    case ViolationKind::Signature: return "signature";
    case ViolationKind::RecordCount: return "record-count";
    case ViolationKind::RecordSize: return "record-size";
    case ViolationKind::RecordInvalid: return "record-invalid";
  }
  return "unknown";
}

std::string describe(const std::vector<Violation>& violations) {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << to_string(violations[i].kind);
    if (violations[i].record_index) out << "[" << *violations[i].record_index << "]";
    out << ": " << violations[i].detail;
  }
  return out.str();
}

Hash32 LedgerState::grants_digest() const {
  Encoder enc;
  enc.count(grants.size());
  for (const auto& [id, g] : grants) {
    enc.hash(id).hash(g.shell_id).text(g.display_name).count(g.scopes.size());
    for (const auto& s : g.scopes) enc.text(s);
    enc.u64(g.autonomy_level).u8(static_cast<std::uint8_t>(g.status)).u64(g.created_at);
  }
  return sha256(enc.buffer());
}

Hash32 LedgerState::digest() const {
  return Sha256()
      .update(head_hash)
      .update(registry.digest())
      .update(memory.digest())
      .update(grants_digest())
      .finish();
}

namespace {

// Working copy of the mutable parts of LedgerState while a block's records are
// checked. The memory index is only read; new activity ids are tracked here.
struct Overlay {
  RegistryState registry;
  std::map<Hash32, GrantState> grants;
  std::set<Hash32> new_activity;
};

std::optional<std::string> check_grant_event(const std::map<Hash32, GrantState>& grants, const GrantEvent& ev) {
  auto it = grants.find(ev.grant_id);
  switch (ev.kind) {
    case GrantEventKind::Requested:
      if (it != grants.end()) return "grant id already registered";
      if (ev.autonomy_level > kMaxAutonomyLevel) return "autonomy_level must be 0-4";
      for (const auto& s : ev.scopes)
        if (!known_scopes().contains(s)) return "unknown scope '" + s + "'";
      return std::nullopt;
    case GrantEventKind::Approved:
      if (it == grants.end()) return "approval of unknown grant";
      if (it->second.status != GrantStatus::Pending) return "only pending grants can be approved";
      return std::nullopt;
    case GrantEventKind::Revoked:
      if (it == grants.end()) return "revocation of unknown grant";
      if (it->second.status == GrantStatus::Revoked) return "grant already revoked";
      return std::nullopt;
  }
  return "unknown grant event";
}

// Applies one record to the overlay or returns why it is rejected; on
// rejection the overlay is unchanged.
std::optional<std::string> apply_record(Overlay& ov, const MemoryIndex& chain_index, const LedgerRecord& record,
                                        std::uint64_t block_time) {
  return std::visit(
      Overloaded{
          [&](const ActivityRecord& a) -> std::optional<std::string> {
            if (auto v = validate_activity(a)) return "activity field " + v->field + ": " + v->reason;
            if (chain_index.contains(a.record_id) || ov.new_activity.contains(a.record_id))
              return "duplicate activity record " + a.record_id.hex();
            ov.new_activity.insert(a.record_id);
            return std::nullopt;
          },
          [&](const SignedTokenOp& op) -> std::optional<std::string> {
            try {
              apply_op_in_place(ov.registry, op, block_time);
            } catch (const TokenError& e) {
              return std::string(to_string(e.code())) + ": " + e.what();
            }
            return std::nullopt;
          },
          [&](const GrantEvent& ev) -> std::optional<std::string> {
            if (auto why = check_grant_event(ov.grants, ev)) return why;
            if (ev.kind == GrantEventKind::Requested) {
              ov.grants.emplace(ev.grant_id, GrantState{ev.shell_id, ev.display_name, ev.scopes, ev.autonomy_level,
                                                        GrantStatus::Pending, ev.at});
            } else {
              ov.grants[ev.grant_id].status =
                  ev.kind == GrantEventKind::Approved ? GrantStatus::Approved : GrantStatus::Revoked;
            }
            return std::nullopt;
          },
      },
      record);
}

std::vector<Violation> check_records(const Block& block, const LedgerState& state, Overlay& ov) {
  std::vector<Violation> out;
  if (block.records.size() > kMaxRecordsPerBlock)
    out.push_back({ViolationKind::RecordCount, "block holds more than 1024 records", std::nullopt});
  for (std::size_t i = 0; i < block.records.size(); ++i) {
    const auto& r = block.records[i];
    if (canonical_encode(r).size() > kMaxRecordBytes) {
      out.push_back({ViolationKind::RecordSize, "record exceeds 256 KiB", i});
      continue;
    }
    if (auto why = apply_record(ov, state.memory, r, block.header.timestamp))
      out.push_back({ViolationKind::RecordInvalid, *why, i});
  }
  return out;
}

std::vector<Violation> check_header(const Block& block, const LedgerState& state, const ChainParams& params) {
  std::vector<Violation> out;
  const BlockHeader& h = block.header;
  if (h.height != state.head.height + 1)
    out.push_back({ViolationKind::Height,
                   "expected height " + std::to_string(state.head.height + 1) + ", got " + std::to_string(h.height),
                   std::nullopt});
  if (h.prev_hash != state.head_hash)
    out.push_back({ViolationKind::Linkage, "prev_hash does not match the current head", std::nullopt});
  if (merkle_root(block.records) != h.merkle_root)
    out.push_back({ViolationKind::MerkleRoot, "merkle root does not match records", std::nullopt});
  if (h.timestamp < state.head.timestamp)
    out.push_back({ViolationKind::Timestamp, "timestamp precedes parent", std::nullopt});
  if (block.records.empty()) out.push_back({ViolationKind::RecordCount, "block has no records", std::nullopt});

  const Validator* v = params.validators.find(h.validator_id);
  if (h.validator_id != scheduled_validator(params.validators, h.height))
    out.push_back({ViolationKind::Schedule, "validator is not scheduled for this height", std::nullopt});
  if (!v || !verify(v->key, signing_bytes(h), h.signature))
    out.push_back({ViolationKind::Signature, "header signature does not verify", std::nullopt});
  return out;
}

Overlay overlay_of(const LedgerState& state) { return {state.registry, state.grants, {}}; }

void commit(LedgerState& state, Overlay&& ov, const Block& block) {
  state.registry = std::move(ov.registry);
  state.grants = std::move(ov.grants);
  state.memory.add_block(block);
  state.head = block.header;
  state.head_hash = header_hash(block.header);
}

}  // namespace

Block make_genesis(const ChainParams& params, const KeyPair& first_validator) {
  Block g;
  g.header.height = 0;
  g.header.prev_hash = Hash32::zero();
  g.header.merkle_root = merkle_root(g.records);
  g.header.timestamp = 0;
  g.header.validator_id = params.validators.first().id;
  if (key_id(first_validator.pub) != g.header.validator_id)
    throw ChainError(ChainErrc::WrongValidator, "genesis must be signed by the first configured validator");
  g.header.signature = sign(first_validator.secret, signing_bytes(g.header));
  return g;
}

std::vector<Violation> validate_genesis(const Block& g, const ChainParams& params) {
  std::vector<Violation> out;
  const auto& h = g.header;
  if (h.height != 0) out.push_back({ViolationKind::Genesis, "genesis height must be 0", std::nullopt});
  if (!h.prev_hash.is_zero()) out.push_back({ViolationKind::Genesis, "genesis prev_hash must be zero", std::nullopt});
  if (!g.records.empty()) out.push_back({ViolationKind::Genesis, "genesis carries no records", std::nullopt});
  if (h.merkle_root != Hash32::zero())
    out.push_back({ViolationKind::MerkleRoot, "genesis merkle root must be zero", std::nullopt});
  if (h.timestamp != 0) out.push_back({ViolationKind::Genesis, "genesis timestamp must be 0", std::nullopt});
  const Validator& first = params.validators.first();
  if (h.validator_id != first.id)
    out.push_back({ViolationKind::Schedule, "genesis must be signed by the first validator", std::nullopt});
  if (!verify(first.key, signing_bytes(h), h.signature))
    out.push_back({ViolationKind::Signature, "genesis signature does not verify", std::nullopt});
  return out;
}

LedgerState genesis_state(const Block& genesis, const ChainParams& params) {
  if (auto v = validate_genesis(genesis, params); !v.empty())
    throw ChainError(ChainErrc::InvalidBlock, "invalid genesis: " + describe(v));
  LedgerState s;
  s.head = genesis.header;
  s.head_hash = header_hash(genesis.header);
  s.registry.chain_owner = params.owner;
  return s;
}

std::vector<Violation> validate_block(const Block& block, const LedgerState& state, const ChainParams& params) {
  auto out = check_header(block, state, params);
  Overlay ov = overlay_of(state);
  auto records = check_records(block, state, ov);
  out.insert(out.end(), records.begin(), records.end());
  return out;
}

void advance(LedgerState& state, const Block& block, const ChainParams& params) {
  auto violations = check_header(block, state, params);
  Overlay ov = overlay_of(state);
  auto records = check_records(block, state, ov);
  violations.insert(violations.end(), records.begin(), records.end());
  if (!violations.empty())
    throw ChainError(ChainErrc::InvalidBlock,
                     "block " + std::to_string(block.header.height) + " rejected: " + describe(violations));
  commit(state, std::move(ov), block);
}

LedgerState next_state(const LedgerState& state, const Block& block, const ChainParams& params) {
  LedgerState next = state;
  advance(next, block, params);
  return next;
}

Block seal_block(std::span<const LedgerRecord> pending, const LedgerState& state, const ChainParams& params,
                 const KeyPair& validator_key, std::uint64_t now) {
  const std::uint64_t height = state.head.height + 1;
  const Hash32 signer = key_id(validator_key.pub);
  if (signer != scheduled_validator(params.validators, height))
    throw ChainError(ChainErrc::WrongValidator, "signer is not scheduled for height " + std::to_string(height));
  if (pending.empty()) throw ChainError(ChainErrc::EmptyBlock, "no records to seal");
  if (pending.size() > kMaxRecordsPerBlock)
    throw ChainError(ChainErrc::RecordInvalid, "more than 1024 records pending", kMaxRecordsPerBlock);

  Overlay ov = overlay_of(state);
  const std::uint64_t timestamp = std::max(now, state.head.timestamp);
  for (std::size_t i = 0; i < pending.size(); ++i) {
    if (canonical_encode(pending[i]).size() > kMaxRecordBytes)
      throw ChainError(ChainErrc::RecordInvalid, "record exceeds 256 KiB", i);
    if (auto why = apply_record(ov, state.memory, pending[i], timestamp))
      throw ChainError(ChainErrc::RecordInvalid, "record " + std::to_string(i) + ": " + *why, i);
  }

  Block b;
  b.records.assign(pending.begin(), pending.end());
  b.header.height = height;
  b.header.prev_hash = state.head_hash;
  b.header.merkle_root = merkle_root(b.records);
  b.header.timestamp = timestamp;
  b.header.validator_id = signer;
  b.header.signature = sign(validator_key.secret, signing_bytes(b.header));
  return b;
}

BlockHeader fork_choice(std::span<const BlockHeader> heads) {
  if (heads.empty()) throw ChainError(ChainErrc::EmptyHeads, "fork_choice needs at least one head");
  const BlockHeader* best = &heads.front();
  Hash32 best_hash = header_hash(*best);
  for (const auto& h : heads.subspan(1)) {
    Hash32 hh = header_hash(h);
    if (h.height > best->height || (h.height == best->height && hh < best_hash)) {
      best = &h;
      best_hash = hh;
    }
  }
  return *best;
}

std::vector<Violation> validate_chain(std::span<const Block> blocks, const ChainParams& params) {
  if (blocks.empty()) return {{ViolationKind::Genesis, "chain has no genesis block", std::nullopt}};
  auto out = validate_genesis(blocks.front(), params);
  if (!out.empty()) return out;
  LedgerState state = genesis_state(blocks.front(), params);
  for (const auto& b : blocks.subspan(1)) {
    auto violations = check_header(b, state, params);
    Overlay ov = overlay_of(state);
    auto records = check_records(b, state, ov);
    violations.insert(violations.end(), records.begin(), records.end());
    if (!violations.empty()) {
      for (auto& v : violations) v.detail = "block " + std::to_string(b.header.height) + ": " + v.detail;
      out.insert(out.end(), violations.begin(), violations.end());
      return out;  // later blocks cannot be judged against a broken prefix
    }
    commit(state, std::move(ov), b);
  }
  return out;
}

Chain::Chain(ChainParams params, Block genesis)
    : params_(std::move(params)), state_(genesis_state(genesis, params_)) {
  blocks_.push_back(std::move(genesis));
}

Chain Chain::replay(ChainParams params, std::span<const Block> blocks) {
  if (blocks.empty()) throw ChainError(ChainErrc::InvalidBlock, "chain has no genesis block");
  Chain chain(std::move(params), blocks.front());
  for (const auto& b : blocks.subspan(1)) chain.append(b);
  return chain;
}

void Chain::append(const Block& block) {
  advance(state_, block, params_);
  blocks_.push_back(block);
}

}  // namespace cogledger
