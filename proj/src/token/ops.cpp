#include "cogledger/token/ops.hpp"

#include <array>

#include "cogledger/overloaded.hpp"

namespace cogledger {

namespace {

constexpr std::array<std::string_view, 4> kClassNames = {"FungibleIncentive", "PersonalityBadge",
                                                         "KnowledgeObjectNft", "ModelNft"};

}  // namespace

std::string_view to_string(TokenClass cls) { return kClassNames.at(static_cast<std::size_t>(cls)); }

void encode(Encoder& enc, const NftMetadata& m) {
  enc.u8(static_cast<std::uint8_t>(m.cls));
  encode(enc, m.content_hash);
  enc.u64(m.schema_version);
  enc.optional(m.trait_code, [](Encoder& e, const std::string& s) { e.text(s); });
  enc.optional(m.weight, [](Encoder& e, Fixed6 w) { e.i64(w.micros); });
  enc.hash(m.issuer);
}

NftMetadata decode_metadata(Decoder& dec) {
  NftMetadata m;
  std::uint8_t cls = dec.u8();
  if (cls > static_cast<std::uint8_t>(TokenClass::ModelNft)) throw DecodeError("unknown token class");
  m.cls = static_cast<TokenClass>(cls);
  m.content_hash = decode_content_address(dec);
  m.schema_version = dec.u64();
  m.trait_code = dec.optional([](Decoder& d) { return d.text(); });
  m.weight = dec.optional([](Decoder& d) { return Fixed6{d.i64()}; });
  m.issuer = dec.tagged<AccountTag>();
  return m;
}

void encode(Encoder& enc, const TokenOp& op) {
  enc.u8(static_cast<std::uint8_t>(op.index()));
  std::visit(Overloaded{
                 [&](const MintNft& o) {
                   enc.hash(o.token_id);
                   encode(enc, o.metadata);
                   enc.hash(o.owner);
                 },
                 [&](const MintIncentive& o) { enc.hash(o.owner).u64(o.amount); },
                 [&](const Transfer& o) {
                   enc.u8(static_cast<std::uint8_t>(o.asset.index()));
                   if (auto* id = std::get_if<TokenId>(&o.asset))
                     enc.hash(*id);
                   else
                     enc.u64(std::get<std::uint64_t>(o.asset));
                   enc.hash(o.from).hash(o.to);
                 },
                 [&](const Burn& o) { enc.hash(o.token_id).u64(o.reason); },
                 [&](const UpdateWeight& o) { enc.hash(o.token_id).i64(o.new_weight.micros); },
             },
             op);
}

TokenOp decode_token_op(Decoder& dec) {
  switch (dec.u8()) {
    case 0: {
      MintNft o;
      o.token_id = dec.tagged<TokenTag>();
      o.metadata = decode_metadata(dec);
      o.owner = dec.tagged<AccountTag>();
      return o;
    }
    case 1: {
      MintIncentive o;
      o.owner = dec.tagged<AccountTag>();
      o.amount = dec.u64();
      return o;
    }
    case 2: {
      Transfer o;
      switch (dec.u8()) {
        case 0: o.asset = dec.tagged<TokenTag>(); break;
        case 1: o.asset = dec.u64(); break;
        default: throw DecodeError("unknown transfer asset tag");
      }
      o.from = dec.tagged<AccountTag>();
      o.to = dec.tagged<AccountTag>();
      return o;
    }
    case 3: {
      Burn o;
      o.token_id = dec.tagged<TokenTag>();
      o.reason = dec.u64();
      return o;
    }
    case 4: {
      UpdateWeight o;
      o.token_id = dec.tagged<TokenTag>();
      o.new_weight = Fixed6{dec.i64()};
      return o;
    }
    default:
      throw DecodeError("unknown token op tag");
  }
}

void encode(Encoder& enc, const SignedTokenOp& op) {
  encode(enc, op.op);
  enc.key(op.signer);
  enc.bytes(op.signature);
}

SignedTokenOp decode_signed_op(Decoder& dec) {
  SignedTokenOp s;
  s.op = decode_token_op(dec);
  s.signer = dec.key();
  s.signature = dec.bytes();
  return s;
}

Bytes op_bytes(const TokenOp& op) {
  Encoder enc;
  encode(enc, op);
  return enc.take();
}

TokenId derive_token_id(const MintNft& mint) {
  MintNft zeroed = mint;
  zeroed.token_id = {};
  return {sha256(op_bytes(TokenOp{zeroed}))};
}

MintNft with_token_id(MintNft mint) {
  mint.token_id = derive_token_id(mint);
  return mint;
}

SignedTokenOp sign_op(TokenOp op, const KeyPair& key) {
  SignedTokenOp s{std::move(op), key.pub, {}};
  s.signature = sign(key.secret, op_bytes(s.op));
  return s;
}

bool signature_valid(const SignedTokenOp& op) { return verify(op.signer, op_bytes(op.op), op.signature); }

std::optional<std::string> metadata_violation(const NftMetadata& m) {
  if (m.cls == TokenClass::FungibleIncentive) return "NFT metadata cannot use the fungible class";
  bool badge = m.cls == TokenClass::PersonalityBadge;
  bool knowledge = m.cls == TokenClass::KnowledgeObjectNft;
  if (badge != m.trait_code.has_value()) return "trait_code present iff class is PersonalityBadge";
  if (knowledge != m.weight.has_value()) return "weight present iff class is KnowledgeObjectNft";
  if (m.trait_code) {
    if (m.trait_code->size() != 4) return "trait_code must be 4 letters";
    for (char c : *m.trait_code)
      if (c < 'A' || c > 'Z') return "trait_code must be uppercase letters";
  }
  if (m.weight && (m.weight->micros < 0 || m.weight->micros > Fixed6::kScale)) return "weight must be in [0,1]";
  Encoder enc;
  encode(enc, m);
  constexpr std::size_t kContentHashBytes = 32 + 8;
  if (enc.buffer().size() - kContentHashBytes > kMaxMetadataFieldBytes) return "metadata exceeds 256 bytes";
  return std::nullopt;
}

}  // namespace cogledger
