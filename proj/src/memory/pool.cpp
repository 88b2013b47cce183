#include "cogledger/memory/pool.hpp"

namespace cogledger {

void MemoryPool::ingest(const ActivityRecord& record, const MemoryIndex& chain) {
  if (auto v = validate_activity(record))
    throw PoolError(PoolErrc::ValidationFailed, v->field, "ValidationFailed(" + v->field + "): " + v->reason);
  std::lock_guard lock(mu_);
  if (activity_ids_.contains(record.record_id) || chain.contains(record.record_id))
    throw PoolError(PoolErrc::Duplicate, "record_id", "Duplicate: record " + record.record_id.hex());
  activity_ids_.insert(record.record_id);
  pending_.emplace_back(record);
}

void MemoryPool::push(LedgerRecord record) {
  std::lock_guard lock(mu_);
  if (auto* a = std::get_if<ActivityRecord>(&record)) activity_ids_.insert(a->record_id);
  pending_.push_back(std::move(record));
}

std::vector<LedgerRecord> MemoryPool::drain(std::size_t max) {
  std::lock_guard lock(mu_);
  std::vector<LedgerRecord> out;
  while (!pending_.empty() && out.size() < max) {
    if (auto* a = std::get_if<ActivityRecord>(&pending_.front())) activity_ids_.erase(a->record_id);
    out.push_back(std::move(pending_.front()));
    pending_.pop_front();
  }
  return out;
}

void MemoryPool::restore_front(std::vector<LedgerRecord> records) {
  std::lock_guard lock(mu_);
  for (auto it = records.rbegin(); it != records.rend(); ++it) {
    if (auto* a = std::get_if<ActivityRecord>(&*it)) activity_ids_.insert(a->record_id);
    pending_.push_front(std::move(*it));
  }
}

std::vector<LedgerRecord> MemoryPool::snapshot() const {
  std::lock_guard lock(mu_);
  return {pending_.begin(), pending_.end()};
}

bool MemoryPool::contains_activity(const Hash32& record_id) const {
  std::lock_guard lock(mu_);
  return activity_ids_.contains(record_id);
}

std::size_t MemoryPool::size() const {
  std::lock_guard lock(mu_);
  return pending_.size();
}

}  // namespace cogledger
