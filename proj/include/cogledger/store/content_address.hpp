#pragma once

#include <cstdint>

#include "cogledger/encoding.hpp"
#include "cogledger/hash.hpp"

namespace cogledger {

// Name of a stored blob: the chunk-tree root plus the blob length.
struct ContentAddress {
  Hash32 root;
  std::uint64_t total_len = 0;

  auto operator<=>(const ContentAddress&) const = default;
};

inline void encode(Encoder& enc, const ContentAddress& a) { enc.hash(a.root).u64(a.total_len); }

inline ContentAddress decode_content_address(Decoder& dec) {
  ContentAddress a;
  a.root = dec.hash();
  a.total_len = dec.u64();
  return a;
}

}  // namespace cogledger
