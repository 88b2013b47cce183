#include "cogledger/core/validators.hpp"

#include <algorithm>
#include <set>

namespace cogledger {

ValidatorSet::ValidatorSet(std::vector<Validator> validators) : validators_(std::move(validators)) {
  if (validators_.empty()) throw ValidatorSetError("EmptySet: validator set must not be empty");
  std::set<Hash32> seen;
  for (const auto& v : validators_) {
    if (v.id != key_id(v.key)) throw ValidatorSetError("validator id does not match its key");
    if (!seen.insert(v.id).second) throw ValidatorSetError("duplicate validator id " + v.id.hex());
  }
}

const Validator* ValidatorSet::find(const Hash32& id) const {
  auto it = std::find_if(validators_.begin(), validators_.end(), [&](const Validator& v) { return v.id == id; });
  return it == validators_.end() ? nullptr : &*it;
}

Hash32 scheduled_validator(std::span<const Validator> validators, std::uint64_t height) {
  if (validators.empty()) throw ValidatorSetError("EmptySet: no validators to schedule");
  std::vector<const Validator*> sorted;
  for (const auto& v : validators) sorted.push_back(&v);
  std::sort(sorted.begin(), sorted.end(), [](const Validator* a, const Validator* b) { return a->id < b->id; });

  // Accumulate in 128 bits so large stakes cannot overflow the total.
  unsigned __int128 total = 0;
  for (const auto* v : sorted) total += v->stake;
  if (total == 0) return sorted[height % sorted.size()]->id;

  unsigned __int128 slot = height % total;
  for (const auto* v : sorted) {
    if (slot < v->stake) return v->id;
    slot -= v->stake;
  }
  return sorted.back()->id;  // unreachable
}

}  // namespace cogledger
