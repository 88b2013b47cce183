#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cogledger/memory/activity.hpp"
#include "cogledger/token/ops.hpp"

namespace cogledger {

enum class GrantEventKind : std::uint8_t {
  Requested = 0,
  Approved = 1,
  Revoked = 2,
};

std::string_view to_string(GrantEventKind kind);

// Audit record of a capability-grant lifecycle step. Secrets are never stored
// on chain.
struct GrantEvent {
  GrantEventKind kind = GrantEventKind::Requested;
  Hash32 grant_id;
  Hash32 shell_id;
  std::string display_name;
  std::vector<std::string> scopes;
  std::uint64_t autonomy_level = 0;
  std::uint64_t at = 0;

  bool operator==(const GrantEvent&) const = default;
};

// Union tag values: activity = 1, token op = 2, grant event = 3.
using LedgerRecord = std::variant<ActivityRecord, SignedTokenOp, GrantEvent>;

inline constexpr std::size_t kMaxRecordBytes = 256 * 1024;

void encode(Encoder& enc, const GrantEvent& ev);
GrantEvent decode_grant_event(Decoder& dec);
void encode(Encoder& enc, const LedgerRecord& record);
LedgerRecord decode_record(Decoder& dec);

Bytes canonical_encode(const LedgerRecord& record);
LedgerRecord decode_record(ByteView bytes);

}  // namespace cogledger
