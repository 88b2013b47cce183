#pragma once

#include <cstdint>
#include <vector>

#include "cogledger/core/record.hpp"

namespace cogledger {

inline constexpr std::size_t kMaxRecordsPerBlock = 1024;

struct BlockHeader {
  std::uint64_t height = 0;
  Hash32 prev_hash;  // all-zero for genesis
  Hash32 merkle_root;
  std::uint64_t timestamp = 0;
  Hash32 validator_id;
  Bytes signature;  // over signing_bytes(header)

  bool operator==(const BlockHeader&) const = default;
};

struct Block {
  BlockHeader header;
  std::vector<LedgerRecord> records;

  bool operator==(const Block&) const = default;
};

void encode(Encoder& enc, const BlockHeader& header);
BlockHeader decode_header(Decoder& dec);
void encode(Encoder& enc, const Block& block);
Block decode_block(Decoder& dec);

Bytes canonical_encode(const BlockHeader& header);
Bytes canonical_encode(const Block& block);
Block decode_block(ByteView bytes);

// Canonical header encoding without the signature field.
Bytes signing_bytes(const BlockHeader& header);

// H(canonical_encode(header)), signature included. Child blocks link to this.
Hash32 header_hash(const BlockHeader& header);

}  // namespace cogledger
