#pragma once

#include <filesystem>
#include <vector>

#include "cogledger/core/block.hpp"

namespace cogledger {

// Append-only chain persistence: a sequence of frames, each a 4-byte
// big-endian length followed by the canonical block bytes.
class ChainFile {
 public:
  explicit ChainFile(std::filesystem::path path) : path_(std::move(path)) {}

  const std::filesystem::path& path() const { return path_; }
  bool exists() const { return std::filesystem::exists(path_); }

  // Appends one frame and flushes it to the OS before returning.
  void append(const Block& block) const;

  // Throws DecodeError on a truncated or malformed frame.
  std::vector<Block> read_all() const;

 private:
  std::filesystem::path path_;
};

Bytes frame_block(const Block& block);
std::vector<Block> parse_chain_bytes(ByteView data);

}  // namespace cogledger
