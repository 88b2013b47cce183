#pragma once

#include <deque>
#include <mutex>
#include <set>
#include <stdexcept>
#include <vector>

#include "cogledger/core/record.hpp"
#include "cogledger/memory/index.hpp"

namespace cogledger {

enum class PoolErrc { ValidationFailed, Duplicate };

class PoolError : public std::runtime_error {
 public:
  PoolError(PoolErrc code, std::string field, const std::string& what)
      : std::runtime_error(what), code_(code), field_(std::move(field)) {}
  PoolErrc code() const { return code_; }
  const std::string& field() const { return field_; }

 private:
  PoolErrc code_;
  std::string field_;
};

// Pending records waiting for the next sealed block, in arrival order.
// Activity records are validated and deduplicated by record_id against both
// the pending set and the chain.
class MemoryPool {
 public:
  // Throws PoolError(ValidationFailed | Duplicate); the pool is unchanged then.
  void ingest(const ActivityRecord& record, const MemoryIndex& chain);

  // Non-activity records (token ops, grant events) queue without dedup.
  void push(LedgerRecord record);

  // Removes and returns up to `max` records from the front.
  std::vector<LedgerRecord> drain(std::size_t max);

  // Puts records back at the front, preserving their order.
  void restore_front(std::vector<LedgerRecord> records);

  std::vector<LedgerRecord> snapshot() const;
  bool contains_activity(const Hash32& record_id) const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }

 private:
  mutable std::mutex mu_;
  std::deque<LedgerRecord> pending_;
  std::set<Hash32> activity_ids_;
};

}  // namespace cogledger
