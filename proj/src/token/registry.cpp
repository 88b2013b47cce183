#include "cogledger/token/registry.hpp"

#include <limits>

#include "cogledger/overloaded.hpp"

namespace cogledger {

std::string_view to_string(TokenErrc code) {
  switch (code) {
    case TokenErrc::DuplicateTokenId: return "DuplicateTokenId";
    case TokenErrc::UnknownToken: return "UnknownToken";
    case TokenErrc::NotOwner: return "NotOwner";
    case TokenErrc::TokenBurned: return "TokenBurned";
    case TokenErrc::InsufficientBalance: return "InsufficientBalance";
    case TokenErrc::WeightOnNonKnowledge: return "WeightOnNonKnowledge";
    case TokenErrc::BadSignature: return "BadSignature";
    case TokenErrc::InvalidOp: return "InvalidOp";
  }
  return "Unknown";
}

std::uint64_t RegistryState::balance_of(const AccountId& account) const {
  auto it = balances.find(account);
  return it == balances.end() ? 0 : it->second;
}

const NftEntry* RegistryState::find(const TokenId& id) const {
  auto it = nfts.find(id);
  return it == nfts.end() ? nullptr : &it->second;
}

Hash32 RegistryState::digest() const {
  Encoder enc;
  enc.hash(chain_owner);
  enc.count(nfts.size());
  for (const auto& [id, e] : nfts) {
    enc.hash(id);
    encode(enc, e.metadata);
    enc.hash(e.owner).boolean(e.alive).u64(e.minted_at);
  }
  enc.count(balances.size());
  for (const auto& [account, amount] : balances) enc.hash(account).u64(amount);
  enc.u64(total_minted).u64(total_burned);
  return sha256(enc.buffer());
}

namespace {

[[noreturn]] void reject(TokenErrc code, const std::string& why) { throw TokenError(code, why); }

NftEntry& live_entry(RegistryState& s, const TokenId& id) {
  auto it = s.nfts.find(id);
  if (it == s.nfts.end()) reject(TokenErrc::UnknownToken, "unknown token " + id.hex());
  if (!it->second.alive) reject(TokenErrc::TokenBurned, "token " + id.hex() + " is burned");
  return it->second;
}

void credit(RegistryState& s, const AccountId& to, std::uint64_t amount) {
  if (s.balance_of(to) > std::numeric_limits<std::uint64_t>::max() - amount)
    reject(TokenErrc::InvalidOp, "balance overflow");
  s.balances[to] += amount;
}

}  // namespace

void apply_op_in_place(RegistryState& s, const SignedTokenOp& signed_op, std::uint64_t block_time) {
  if (!signature_valid(signed_op)) reject(TokenErrc::BadSignature, "op signature does not verify");
  const AccountId signer = account_of(signed_op.signer);
  const bool by_owner = signer == s.chain_owner;

  // Each branch validates fully before its first write.
  std::visit(
      Overloaded{
          [&](const MintNft& op) {
            if (auto why = metadata_violation(op.metadata)) reject(TokenErrc::InvalidOp, *why);
            if (op.token_id != derive_token_id(op)) reject(TokenErrc::InvalidOp, "token id is not derived from mint");
            if (!by_owner && signer != op.metadata.issuer)
              reject(TokenErrc::NotOwner, "mint must be signed by the chain owner or the issuer");
            if (s.nfts.contains(op.token_id)) reject(TokenErrc::DuplicateTokenId, "token id already minted");
            s.nfts.emplace(op.token_id, NftEntry{op.metadata, op.owner, true, block_time});
          },
          [&](const MintIncentive& op) {
            if (op.amount == 0) reject(TokenErrc::InvalidOp, "amount must be positive");
            if (!by_owner) reject(TokenErrc::NotOwner, "incentives are minted by the chain owner");
            if (s.total_minted > std::numeric_limits<std::uint64_t>::max() - op.amount)
              reject(TokenErrc::InvalidOp, "supply overflow");
            credit(s, op.owner, op.amount);
            s.total_minted += op.amount;
          },
          [&](const Transfer& op) {
            if (signer != op.from) reject(TokenErrc::NotOwner, "transfer must be signed by the sender");
            if (auto* id = std::get_if<TokenId>(&op.asset)) {
              NftEntry& e = live_entry(s, *id);
              if (e.owner != op.from) reject(TokenErrc::NotOwner, "sender does not own token");
              e.owner = op.to;
            } else {
              std::uint64_t amount = std::get<std::uint64_t>(op.asset);
              if (amount == 0) reject(TokenErrc::InvalidOp, "amount must be positive");
              std::uint64_t have = s.balance_of(op.from);
              if (have < amount) reject(TokenErrc::InsufficientBalance, "insufficient COG balance");
              if (op.from != op.to) {
                if (s.balance_of(op.to) > std::numeric_limits<std::uint64_t>::max() - amount)
                  reject(TokenErrc::InvalidOp, "balance overflow");
                if (have == amount)
                  s.balances.erase(op.from);
                else
                  s.balances[op.from] = have - amount;
                credit(s, op.to, amount);
              }
            }
          },
          [&](const Burn& op) {
            NftEntry& e = live_entry(s, op.token_id);
            if (!by_owner && signer != e.owner) reject(TokenErrc::NotOwner, "burn must be signed by the token owner");
            e.alive = false;
          },
          [&](const UpdateWeight& op) {
            if (op.new_weight.micros < 0 || op.new_weight.micros > Fixed6::kScale)
              reject(TokenErrc::InvalidOp, "weight must be in [0,1]");
            auto it = s.nfts.find(op.token_id);
            if (it == s.nfts.end()) reject(TokenErrc::UnknownToken, "unknown token " + op.token_id.hex());
            if (it->second.metadata.cls != TokenClass::KnowledgeObjectNft)
              reject(TokenErrc::WeightOnNonKnowledge, "only knowledge objects carry a weight");
            if (!it->second.alive) reject(TokenErrc::TokenBurned, "token is burned");
            if (!by_owner) reject(TokenErrc::NotOwner, "weight updates are signed by the chain owner");
            it->second.metadata.weight = op.new_weight;
          },
      },
      signed_op.op);
}

RegistryState apply_op(const RegistryState& state, const SignedTokenOp& op, std::uint64_t block_time) {
  RegistryState next = state;
  apply_op_in_place(next, op, block_time);
  return next;
}

AssetView assets_of(const RegistryState& state, const AccountId& owner) {
  AssetView view{owner, state.balance_of(owner), {}};
  for (TokenClass cls : {TokenClass::PersonalityBadge, TokenClass::KnowledgeObjectNft, TokenClass::ModelNft}) {
    AssetGroup group{cls, {}};
    for (const auto& [id, entry] : state.nfts)
      if (entry.alive && entry.owner == owner && entry.metadata.cls == cls) group.items.emplace_back(id, entry);
    view.groups.push_back(std::move(group));
  }
  return view;
}

TokenOp reward_codification(const RegistryState&, const AccountId& agent, std::uint64_t reward) {
  return MintIncentive{agent, reward};
}

}  // namespace cogledger
