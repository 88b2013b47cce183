#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cogledger/core/block.hpp"
#include "cogledger/core/validators.hpp"
#include "cogledger/memory/index.hpp"
#include "cogledger/token/registry.hpp"

namespace cogledger {

// Scope names a capability grant may carry.
inline const std::set<std::string>& known_scopes() {
  static const std::set<std::string> scopes = {"read_assets", "submit_activity", "read_knowledge", "query_model",
                                               "take_quiz"};
  return scopes;
}

inline constexpr std::uint64_t kMaxAutonomyLevel = 4;

struct ChainParams {
  ValidatorSet validators;
  AccountId owner;  // the ledger's owner account; signs refinery and reward ops
};

enum class GrantStatus : std::uint8_t { Pending = 0, Approved = 1, Revoked = 2 };

std::string_view to_string(GrantStatus status);

// On-chain view of a grant's lifecycle.
struct GrantState {
  Hash32 shell_id;
  std::string display_name;
  std::vector<std::string> scopes;
  std::uint64_t autonomy_level = 0;
  GrantStatus status = GrantStatus::Pending;
  std::uint64_t created_at = 0;

  bool operator==(const GrantState&) const = default;
};

// Everything derived from the chain, tip included.
struct LedgerState {
  BlockHeader head;
  Hash32 head_hash;
  RegistryState registry;
  MemoryIndex memory;
  std::map<Hash32, GrantState> grants;

  std::uint64_t height() const { return head.height; }
  Hash32 grants_digest() const;
  Hash32 digest() const;
};

enum class ViolationKind {
  Genesis,
  Height,
  Linkage,
  MerkleRoot,
  Timestamp,
  Schedule,
  Signature,
  RecordCount,
  RecordSize,
  RecordInvalid,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string detail;
  std::optional<std::size_t> record_index;
};

std::string describe(const std::vector<Violation>& violations);

enum class ChainErrc {
  WrongValidator,
  EmptyBlock,
  RecordInvalid,
  EmptyHeads,
  InvalidBlock,
};

class ChainError : public std::runtime_error {
 public:
  ChainError(ChainErrc code, const std::string& what, std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(what), code_(code), index_(index) {}
  ChainErrc code() const { return code_; }
  std::optional<std::size_t> record_index() const { return index_; }

 private:
  ChainErrc code_;
  std::optional<std::size_t> index_;
};

// Genesis: height 0, zero prev_hash, no records, timestamp 0, signed by the
// first configured validator.
Block make_genesis(const ChainParams& params, const KeyPair& first_validator);
std::vector<Violation> validate_genesis(const Block& genesis, const ChainParams& params);
LedgerState genesis_state(const Block& genesis, const ChainParams& params);

// Checks linkage, height, Merkle root, timestamp, schedule, signature and every
// record's state transition. Reports all violations, not only the first.
std::vector<Violation> validate_block(const Block& block, const LedgerState& state, const ChainParams& params);

// Validates and applies; throws ChainError(InvalidBlock) listing violations.
LedgerState next_state(const LedgerState& state, const Block& block, const ChainParams& params);
void advance(LedgerState& state, const Block& block, const ChainParams& params);

// Builds and signs the next block on top of `state.head`.
// Errors: WrongValidator, EmptyBlock, RecordInvalid(index).
Block seal_block(std::span<const LedgerRecord> pending, const LedgerState& state, const ChainParams& params,
                 const KeyPair& validator_key, std::uint64_t now);

// Greatest height wins; ties go to the lexicographically smallest header hash.
BlockHeader fork_choice(std::span<const BlockHeader> heads);

// Full-chain check from genesis; violations carry the block height in `detail`.
std::vector<Violation> validate_chain(std::span<const Block> blocks, const ChainParams& params);

// An append-only validated chain with its derived state.
class Chain {
 public:
  Chain(ChainParams params, Block genesis);

  static Chain replay(ChainParams params, std::span<const Block> blocks);

  const ChainParams& params() const { return params_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const LedgerState& state() const { return state_; }
  const BlockHeader& head() const { return state_.head; }
  std::uint64_t height() const { return state_.head.height; }

  Block seal(std::span<const LedgerRecord> pending, const KeyPair& validator_key, std::uint64_t now) const {
    return seal_block(pending, state_, params_, validator_key, now);
  }
  std::vector<Violation> validate(const Block& block) const { return validate_block(block, state_, params_); }
  void append(const Block& block);

 private:
  ChainParams params_;
  std::vector<Block> blocks_;
  LedgerState state_;
};

}  // namespace cogledger
