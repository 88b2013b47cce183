#include "cogledger/memory/history_csv.hpp"

#include <charconv>
#include <optional>

namespace cogledger {

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_has_content = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  auto end_row = [&] {
    end_field();
    if (row_has_content || row.size() > 1 || !row.front().empty()) rows.push_back(std::move(row));
    row.clear();
    row_has_content = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        row_has_content = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_row();
        break;
      case '\n':
        end_row();
        break;
      default:
        field.push_back(c);
    }
  }
  if (in_quotes) throw std::invalid_argument("unterminated quoted field");
  if (!field.empty() || !row.empty() || row_has_content) end_row();
  return rows;
}

namespace {

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  if (s.empty()) return std::nullopt;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

HistoryImport import_history_csv(std::string_view csv, const AccountId& actor, const Hash32& shell_id) {
  if (csv.starts_with("\xEF\xBB\xBF")) csv.remove_prefix(3);
  std::vector<std::vector<std::string>> rows;
  try {
    rows = parse_csv(csv);
  } catch (const std::invalid_argument& e) {
    throw BadHeader(std::string("unreadable CSV: ") + e.what());
  }
  if (rows.empty()) throw BadHeader("missing header line");
  const auto& header = rows.front();
  if (header != std::vector<std::string>{"url", "title", "visited_at", "dwell_seconds"})
    throw BadHeader("header must be exactly '" + std::string(kHistoryCsvHeader) + "'");

  HistoryImport result;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != 4) {
      result.errors.push_back({i, "expected 4 fields, got " + std::to_string(row.size())});
      continue;
    }
    auto visited = parse_int(row[2]);
    if (!visited || *visited < 0) {
      result.errors.push_back({i, "malformed visited_at '" + row[2] + "'"});
      continue;
    }
    auto dwell = parse_int(row[3]);
    if (!dwell) {
      result.errors.push_back({i, "malformed dwell_seconds '" + row[3] + "'"});
      continue;
    }
    if (*dwell < 0) {
      result.errors.push_back({i, "negative dwell_seconds"});
      continue;
    }
    ActivityRecord r;
    r.actor = actor;
    r.kind = ActivityKind::PageVisit;
    r.url = row[0];
    if (!row[1].empty()) r.title = row[1];
    r.dwell_seconds = *dwell;
    r.shell_id = shell_id;
    r.captured_at = static_cast<std::uint64_t>(*visited);
    r = with_record_id(std::move(r));
    if (auto v = validate_activity(r)) {
      result.errors.push_back({i, v->field + ": " + v->reason});
      continue;
    }
    result.records.push_back(std::move(r));
  }
  return result;
}

}  // namespace cogledger
