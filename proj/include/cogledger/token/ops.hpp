#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "cogledger/crypto.hpp"
#include "cogledger/encoding.hpp"
#include "cogledger/fixed_point.hpp"
#include "cogledger/store/content_address.hpp"

namespace cogledger {

enum class TokenClass : std::uint8_t {
  FungibleIncentive = 0,
  PersonalityBadge = 1,
  KnowledgeObjectNft = 2,
  ModelNft = 3,
};

std::string_view to_string(TokenClass cls);

// NFT metadata holds a content hash and a few small fields, never bulk content.
struct NftMetadata {
  TokenClass cls = TokenClass::KnowledgeObjectNft;
  ContentAddress content_hash;
  std::uint64_t schema_version = 1;
  std::optional<std::string> trait_code;  // badges only
  std::optional<Fixed6> weight;           // knowledge objects only
  AccountId issuer;

  bool operator==(const NftMetadata&) const = default;
};

// Size limit for everything in the metadata except the content hash.
inline constexpr std::size_t kMaxMetadataFieldBytes = 256;

struct MintNft {
  TokenId token_id;
  NftMetadata metadata;
  AccountId owner;
  bool operator==(const MintNft&) const = default;
};

struct MintIncentive {
  AccountId owner;
  std::uint64_t amount = 0;
  bool operator==(const MintIncentive&) const = default;
};

struct Transfer {
  std::variant<TokenId, std::uint64_t> asset;  // NFT id or COG amount
  AccountId from;
  AccountId to;
  bool operator==(const Transfer&) const = default;
};

enum class BurnReason : std::uint64_t {
  OwnerRequest = 0,
  Refinery = 1,
};

struct Burn {
  TokenId token_id;
  std::uint64_t reason = 0;
  bool operator==(const Burn&) const = default;
};

struct UpdateWeight {
  TokenId token_id;
  Fixed6 new_weight;
  bool operator==(const UpdateWeight&) const = default;
};

using TokenOp = std::variant<MintNft, MintIncentive, Transfer, Burn, UpdateWeight>;

// An op plus its originator's signature over encode(op).
struct SignedTokenOp {
  TokenOp op;
  PublicKey signer;
  Bytes signature;
  bool operator==(const SignedTokenOp&) const = default;
};

void encode(Encoder& enc, const NftMetadata& m);
NftMetadata decode_metadata(Decoder& dec);
void encode(Encoder& enc, const TokenOp& op);
TokenOp decode_token_op(Decoder& dec);
void encode(Encoder& enc, const SignedTokenOp& op);
SignedTokenOp decode_signed_op(Decoder& dec);

Bytes op_bytes(const TokenOp& op);

// H(encode(mint) with token_id zeroed).
TokenId derive_token_id(const MintNft& mint);
MintNft with_token_id(MintNft mint);

SignedTokenOp sign_op(TokenOp op, const KeyPair& key);
bool signature_valid(const SignedTokenOp& op);

// Structural checks on metadata (class/field presence rules, size bound).
std::optional<std::string> metadata_violation(const NftMetadata& m);

}  // namespace cogledger
