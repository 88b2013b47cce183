#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "cogledger/token/ops.hpp"

namespace cogledger {

enum class TokenErrc {
  DuplicateTokenId,
  UnknownToken,
  NotOwner,
  TokenBurned,
  InsufficientBalance,
  WeightOnNonKnowledge,
  BadSignature,
  InvalidOp,
};

std::string_view to_string(TokenErrc code);

class TokenError : public std::runtime_error {
 public:
  TokenError(TokenErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  TokenErrc code() const { return code_; }

 private:
  TokenErrc code_;
};

struct NftEntry {
  NftMetadata metadata;
  AccountId owner;
  bool alive = true;
  std::uint64_t minted_at = 0;  // timestamp of the block that carried the mint

  bool operator==(const NftEntry&) const = default;
};

// Asset state: a pure fold over the token ops on chain. Burned NFTs stay in
// the table with alive = false.
struct RegistryState {
  AccountId chain_owner;
  std::map<TokenId, NftEntry> nfts;
  std::map<AccountId, std::uint64_t> balances;  // zero balances are not stored
  std::uint64_t total_minted = 0;
  std::uint64_t total_burned = 0;

  std::uint64_t balance_of(const AccountId& account) const;
  const NftEntry* find(const TokenId& id) const;
  Hash32 digest() const;

  bool operator==(const RegistryState&) const = default;
};

// Validates `op` against `state` and applies it. Throws TokenError and leaves
// `state` untouched when the op is rejected.
void apply_op_in_place(RegistryState& state, const SignedTokenOp& op, std::uint64_t block_time = 0);

RegistryState apply_op(const RegistryState& state, const SignedTokenOp& op, std::uint64_t block_time = 0);

struct AssetGroup {
  TokenClass cls;
  std::vector<std::pair<TokenId, NftEntry>> items;  // ascending TokenId
};

struct AssetView {
  AccountId owner;
  std::uint64_t balance = 0;
  std::vector<AssetGroup> groups;  // badge, knowledge object, model, in that order
};

// Wallet view: COG balance plus alive NFTs grouped by class.
AssetView assets_of(const RegistryState& state, const AccountId& owner);

inline constexpr std::uint64_t kDefaultCodificationReward = 10;

TokenOp reward_codification(const RegistryState& state, const AccountId& agent,
                            std::uint64_t reward = kDefaultCodificationReward);

}  // namespace cogledger
