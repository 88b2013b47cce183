#include "cogledger/core/record.hpp"

#include "cogledger/overloaded.hpp"

namespace cogledger {

std::string_view to_string(GrantEventKind kind) {
  switch (kind) {
    case GrantEventKind::Requested: return "requested";
    case GrantEventKind::Approved: return "approved";
    case GrantEventKind::Revoked: return "revoked";
  }
  return "unknown";
}

void encode(Encoder& enc, const GrantEvent& ev) {
  enc.u8(static_cast<std::uint8_t>(ev.kind));
  enc.hash(ev.grant_id).hash(ev.shell_id).text(ev.display_name);
  enc.count(ev.scopes.size());
  for (const auto& s : ev.scopes) enc.text(s);
  enc.u64(ev.autonomy_level).u64(ev.at);
}

GrantEvent decode_grant_event(Decoder& dec) {
  GrantEvent ev;
  std::uint8_t kind = dec.u8();
  if (kind > static_cast<std::uint8_t>(GrantEventKind::Revoked)) throw DecodeError("unknown grant event kind");
  ev.kind = static_cast<GrantEventKind>(kind);
  ev.grant_id = dec.hash();
  ev.shell_id = dec.hash();
  ev.display_name = dec.text();
  std::size_t n = dec.count();
  for (std::size_t i = 0; i < n; ++i) ev.scopes.push_back(dec.text());
  ev.autonomy_level = dec.u64();
  ev.at = dec.u64();
  return ev;
}

void encode(Encoder& enc, const LedgerRecord& record) {
  std::visit(Overloaded{
                 [&](const ActivityRecord& r) {
                   enc.u8(1);
                   encode(enc, r);
                 },
                 [&](const SignedTokenOp& r) {
                   enc.u8(2);
                   encode(enc, r);
                 },
                 [&](const GrantEvent& r) {
                   enc.u8(3);
                   encode(enc, r);
                 },
             },
             record);
}

LedgerRecord decode_record(Decoder& dec) {
  switch (dec.u8()) {
    case 1: return decode_activity(dec);
    case 2: return decode_signed_op(dec);
    case 3: return decode_grant_event(dec);
    default: throw DecodeError("unknown ledger record tag");
  }
}

Bytes canonical_encode(const LedgerRecord& record) {
  Encoder enc;
  encode(enc, record);
  return enc.take();
}

LedgerRecord decode_record(ByteView bytes) {
  Decoder dec(bytes);
  LedgerRecord r = decode_record(dec);
  dec.expect_end();
  return r;
}

}  // namespace cogledger
