#include "cogledger/memory/index.hpp"

#include <algorithm>

#include "cogledger/text.hpp"

namespace cogledger {

std::set<std::string> index_tokens(const ActivityRecord& r) {
  std::set<std::string> out;
  auto add = [&](std::string_view text) {
    for (auto& t : tokenize(text)) out.insert(std::move(t));
  };
  if (r.title) add(*r.title);
  if (r.query_terms)
    for (const auto& term : *r.query_terms) add(term);
  if (r.url) add(url_host(*r.url));
  return out;
}

bool matches(const ActivityRecord& r, const QueryFilter& f) {
  if (f.from && r.captured_at < *f.from) return false;
  if (f.to && r.captured_at > *f.to) return false;
  if (f.kind && r.kind != *f.kind) return false;
  if (f.token && !index_tokens(r).contains(ascii_lower(*f.token))) return false;
  return true;
}

void MemoryIndex::add(const ActivityRecord& record, RecordLocator locator) {
  auto [it, inserted] = records_.emplace(record.record_id, Entry{record, locator});
  if (!inserted) return;
  for (const auto& t : index_tokens(record)) by_token_[t].insert(record.record_id);
  by_kind_[record.kind].insert(record.record_id);
  by_time_.emplace(record.captured_at, record.record_id);
}

void MemoryIndex::add_block(const Block& block) {
  for (std::size_t i = 0; i < block.records.size(); ++i)
    if (auto* a = std::get_if<ActivityRecord>(&block.records[i]))
      add(*a, {block.header.height, static_cast<std::uint32_t>(i)});
}

const MemoryIndex::Entry* MemoryIndex::find(const Hash32& record_id) const {
  auto it = records_.find(record_id);
  return it == records_.end() ? nullptr : &it->second;
}

std::vector<ActivityRecord> MemoryIndex::query(const QueryFilter& f) const {
  // Narrow with the most selective index, then check the rest per record.
  const std::set<Hash32>* candidates = nullptr;
  static const std::set<Hash32> kEmpty;
  if (f.token) {
    auto it = by_token_.find(ascii_lower(*f.token));
    candidates = it == by_token_.end() ? &kEmpty : &it->second;
  }
  if (f.kind) {
    auto it = by_kind_.find(*f.kind);
    const auto* kind_set = it == by_kind_.end() ? &kEmpty : &it->second;
    if (!candidates || kind_set->size() < candidates->size()) candidates = kind_set;
  }

  std::vector<std::pair<std::uint64_t, Hash32>> keys;
  if (candidates) {
    for (const auto& id : *candidates) {
      const auto& rec = records_.at(id).record;
      if (matches(rec, f)) keys.emplace_back(rec.captured_at, id);
    }
    std::sort(keys.begin(), keys.end());
  } else {
    auto lo = by_time_.lower_bound({f.from.value_or(0), Hash32::zero()});
    for (auto it = lo; it != by_time_.end(); ++it) {
      if (f.to && it->first > *f.to) break;
      keys.push_back(*it);
    }
  }

  std::vector<ActivityRecord> out;
  out.reserve(keys.size());
  for (const auto& [t, id] : keys) out.push_back(records_.at(id).record);
  return out;
}

Hash32 MemoryIndex::digest() const {
  Encoder enc;
  enc.count(records_.size());
  for (const auto& [id, e] : records_) {
    encode(enc, e.record);
    enc.u64(e.locator.height).u64(e.locator.position);
  }
  enc.count(by_token_.size());
  for (const auto& [token, ids] : by_token_) {
    enc.text(token).count(ids.size());
    for (const auto& id : ids) enc.hash(id);
  }
  enc.count(by_kind_.size());
  for (const auto& [kind, ids] : by_kind_) {
    enc.u8(static_cast<std::uint8_t>(kind)).count(ids.size());
    for (const auto& id : ids) enc.hash(id);
  }
  return sha256(enc.buffer());
}

}  // namespace cogledger
