#pragma once

#include <span>
#include <vector>

#include "cogledger/core/record.hpp"

namespace cogledger {

inline constexpr std::uint8_t kLeafTag = 0x00;
inline constexpr std::uint8_t kInternalTag = 0x01;

// H(0x00 || payload)
Hash32 merkle_leaf(ByteView payload);

// Folds already-tagged leaves level by level: internal = H(0x01 || left || right),
// an unpaired last node is promoted unchanged. No leaves -> all-zero hash.
Hash32 merkle_fold(std::vector<Hash32> level);

// Leaves are H(0x00 || canonical_encode(record)).
Hash32 merkle_root(std::span<const LedgerRecord> records);

}  // namespace cogledger
