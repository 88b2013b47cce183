#include "cogledger/core/chain_file.hpp"

#include <fstream>
#include <iterator>
#include <system_error>

#include "cogledger/encoding.hpp"

namespace cogledger {

Bytes frame_block(const Block& block) {
  Bytes body = canonical_encode(block);
  Bytes frame;
  frame.reserve(body.size() + 4);
  put_u32_be(frame, static_cast<std::uint32_t>(body.size()));
  frame.insert(frame.end(), body.begin(), body.end());
  return frame;
}

std::vector<Block> parse_chain_bytes(ByteView data) {
  std::vector<Block> blocks;
  std::size_t pos = 0;
  while (pos < data.size()) {
    if (data.size() - pos < 4) throw DecodeError("truncated frame length");
    std::uint32_t len = get_u32_be(data.subspan(pos, 4));
    pos += 4;
    if (data.size() - pos < len) throw DecodeError("truncated frame body");
    blocks.push_back(decode_block(data.subspan(pos, len)));
    pos += len;
  }
  return blocks;
}

void ChainFile::append(const Block& block) const {
  Bytes frame = frame_block(block);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw std::system_error(errno, std::generic_category(), "cannot open " + path_.string());
  out.write(reinterpret_cast<const char*>(frame.data()), static_cast<std::streamsize>(frame.size()));
  out.flush();
  if (!out) throw std::system_error(errno, std::generic_category(), "write failed for " + path_.string());
}

std::vector<Block> ChainFile::read_all() const {
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path_.string());
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_chain_bytes(data);
}

}  // namespace cogledger
