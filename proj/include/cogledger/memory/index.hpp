#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cogledger/core/block.hpp"
#include "cogledger/memory/activity.hpp"

namespace cogledger {

struct RecordLocator {
  std::uint64_t height = 0;
  std::uint32_t position = 0;  // index within the block's record list

  auto operator<=>(const RecordLocator&) const = default;
};

// Conjunctive filter; every unset field matches everything. The time range is
// inclusive on both ends.
struct QueryFilter {
  std::optional<std::uint64_t> from;
  std::optional<std::uint64_t> to;
  std::optional<ActivityKind> kind;
  std::optional<std::string> token;
};

// Tokens a record contributes to the inverted index: title, query terms and
// URL host, tokenized with cogledger::tokenize.
std::set<std::string> index_tokens(const ActivityRecord& record);

// True when `record` passes `filter` (token compared lowercased, exact).
bool matches(const ActivityRecord& record, const QueryFilter& filter);

class MemoryIndex {
 public:
  struct Entry {
    ActivityRecord record;
    RecordLocator locator;
    bool operator==(const Entry&) const = default;
  };

  void add(const ActivityRecord& record, RecordLocator locator);
  void add_block(const Block& block);

  bool contains(const Hash32& record_id) const { return records_.contains(record_id); }
  const Entry* find(const Hash32& record_id) const;
  std::size_t size() const { return records_.size(); }

  // Results ordered by (captured_at, record_id) ascending.
  std::vector<ActivityRecord> query(const QueryFilter& filter) const;

  Hash32 digest() const;
  bool operator==(const MemoryIndex&) const = default;

 private:
  std::map<Hash32, Entry> records_;
  std::map<std::string, std::set<Hash32>> by_token_;
  std::map<ActivityKind, std::set<Hash32>> by_kind_;
  std::set<std::pair<std::uint64_t, Hash32>> by_time_;
};

}  // namespace cogledger
