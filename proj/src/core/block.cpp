#include "cogledger/core/block.hpp"

namespace cogledger {

namespace {
void encode_unsigned(Encoder& enc, const BlockHeader& h) {
  enc.u64(h.height).hash(h.prev_hash).hash(h.merkle_root).u64(h.timestamp).hash(h.validator_id);
}
}  // namespace

void encode(Encoder& enc, const BlockHeader& h) {
  encode_unsigned(enc, h);
  enc.bytes(h.signature);
}

BlockHeader decode_header(Decoder& dec) {
  BlockHeader h;
  h.height = dec.u64();
  h.prev_hash = dec.hash();
  h.merkle_root = dec.hash();
  h.timestamp = dec.u64();
  h.validator_id = dec.hash();
  h.signature = dec.bytes();
  return h;
}

void encode(Encoder& enc, const Block& block) {
  encode(enc, block.header);
  enc.count(block.records.size());
  for (const auto& r : block.records) encode(enc, r);
}

Block decode_block(Decoder& dec) {
  Block b;
  b.header = decode_header(dec);
  std::size_t n = dec.count();
  if (n > kMaxRecordsPerBlock) throw DecodeError("block record count exceeds limit");
  b.records.reserve(n);
  for (std::size_t i = 0; i < n; ++i) b.records.push_back(decode_record(dec));
  return b;
}

Bytes canonical_encode(const BlockHeader& header) {
  Encoder enc;
  encode(enc, header);
  return enc.take();
}

Bytes canonical_encode(const Block& block) {
  Encoder enc;
  encode(enc, block);
  return enc.take();
}

Block decode_block(ByteView bytes) {
  Decoder dec(bytes);
  Block b = decode_block(dec);
  dec.expect_end();
  return b;
}

Bytes signing_bytes(const BlockHeader& header) {
  Encoder enc;
  encode_unsigned(enc, header);
  return enc.take();
}

Hash32 header_hash(const BlockHeader& header) { return sha256(canonical_encode(header)); }

}  // namespace cogledger
