#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cogledger/encoding.hpp"
#include "cogledger/hash.hpp"

namespace cogledger {

enum class ActivityKind : std::uint8_t {
  PageVisit = 0,
  Search = 1,
  Bookmark = 2,
  QuizAnswer = 3,
  ShellEvent = 4,
};

inline constexpr std::uint8_t kActivityKindCount = 5;

std::string_view to_string(ActivityKind kind);
std::optional<ActivityKind> parse_activity_kind(std::string_view name);

// One lifelogged user action. Fields are encoded in declaration order.
struct ActivityRecord {
  Hash32 record_id;
  AccountId actor;
  ActivityKind kind = ActivityKind::PageVisit;
  std::optional<std::string> url;
  std::optional<std::string> title;
  std::optional<std::int64_t> dwell_seconds;
  std::optional<std::vector<std::string>> query_terms;
  std::optional<std::string> question_id;
  std::optional<std::int64_t> answer_value;
  Hash32 shell_id;
  std::uint64_t captured_at = 0;

  bool operator==(const ActivityRecord&) const = default;
};

void encode(Encoder& enc, const ActivityRecord& record);
ActivityRecord decode_activity(Decoder& dec);

// Hash of the canonical encoding with the record_id field omitted.
Hash32 derive_record_id(const ActivityRecord& record);

// Returns the record with record_id filled in.
ActivityRecord with_record_id(ActivityRecord record);

struct FieldViolation {
  std::string field;
  std::string reason;
};

// Kind-specific invariants plus record_id recomputation.
std::optional<FieldViolation> validate_activity(const ActivityRecord& record);

}  // namespace cogledger
