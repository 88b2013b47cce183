#include "cogledger/core/merkle.hpp"

namespace cogledger {

Hash32 merkle_leaf(ByteView payload) { return Sha256().update(kLeafTag).update(payload).finish(); }

Hash32 merkle_fold(std::vector<Hash32> level) {
  if (level.empty()) return Hash32::zero();
  while (level.size() > 1) {
    std::vector<Hash32> next;
    next.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < level.size(); i += 2)
      next.push_back(Sha256().update(kInternalTag).update(level[i]).update(level[i + 1]).finish());
    if (level.size() % 2 == 1) next.push_back(level.back());
    level = std::move(next);
  }
  return level.front();
}

Hash32 merkle_root(std::span<const LedgerRecord> records) {
  std::vector<Hash32> leaves;
  leaves.reserve(records.size());
  for (const auto& r : records) leaves.push_back(merkle_leaf(canonical_encode(r)));
  return merkle_fold(std::move(leaves));
}

}  // namespace cogledger
