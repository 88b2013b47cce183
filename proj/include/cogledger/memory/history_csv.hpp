#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cogledger/memory/activity.hpp"

namespace cogledger {

// Exact header line required by the history import.
inline constexpr std::string_view kHistoryCsvHeader = "url,title,visited_at,dwell_seconds";

class BadHeader : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RowError {
  std::size_t row;  // 1-based data row (the header is not counted)
  std::string reason;
};

struct HistoryImport {
  std::vector<ActivityRecord> records;
  std::vector<RowError> errors;  // partial import: good rows are still returned
};

// RFC 4180 style CSV (quoted fields, doubled quotes, CRLF or LF). One PageVisit
// per valid row; visited_at and dwell_seconds are base-10 integers.
HistoryImport import_history_csv(std::string_view csv, const AccountId& actor, const Hash32& shell_id);

// Splits CSV text into rows of fields. Throws std::invalid_argument on an
// unterminated quote.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

}  // namespace cogledger
