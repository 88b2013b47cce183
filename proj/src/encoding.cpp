#include "cogledger/encoding.hpp"

#include <limits>

namespace cogledger {

Encoder& Encoder::u8(std::uint8_t v) {
  buf_.push_back(v);
  return *this;
}

Encoder& Encoder::u64(std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) buf_.push_back(static_cast<std::uint8_t>(v >> shift));
  return *this;
}

Encoder& Encoder::count(std::size_t n) {
  if (n > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("length exceeds 32 bits");
  put_u32_be(buf_, static_cast<std::uint32_t>(n));
  return *this;
}

Encoder& Encoder::bytes(ByteView b) {
  count(b.size());
  return raw(b);
}

Encoder& Encoder::raw(ByteView b) {
  buf_.insert(buf_.end(), b.begin(), b.end());
  return *this;
}

ByteView Decoder::take(std::size_t n) {
  if (remaining() < n) throw DecodeError("truncated input");
  ByteView out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

std::uint8_t Decoder::u8() { return take(1)[0]; }

std::uint64_t Decoder::u64() {
  ByteView b = take(8);
  std::uint64_t v = 0;
  for (auto byte : b) v = (v << 8) | byte;
  return v;
}

bool Decoder::boolean() {
  std::uint8_t v = u8();
  if (v > 1) throw DecodeError("invalid presence/boolean byte");
  return v == 1;
}

std::size_t Decoder::count() { return get_u32_be(take(4)); }

Bytes Decoder::bytes() {
  std::size_t n = count();
  ByteView b = take(n);
  return {b.begin(), b.end()};
}

std::string Decoder::text() {
  std::size_t n = count();
  return as_string(take(n));
}

Hash32 Decoder::hash() {
  Hash32 h;
  ByteView b = take(32);
  std::copy(b.begin(), b.end(), h.bytes.begin());
  return h;
}

PublicKey Decoder::key() {
  PublicKey k;
  ByteView b = take(32);
  std::copy(b.begin(), b.end(), k.bytes.begin());
  return k;
}

void Decoder::expect_end() const {
  if (!done()) throw DecodeError("trailing bytes after value");
}

void put_u32_be(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::uint32_t get_u32_be(ByteView in) {
  if (in.size() < 4) throw DecodeError("truncated length prefix");
  return (std::uint32_t{in[0]} << 24) | (std::uint32_t{in[1]} << 16) | (std::uint32_t{in[2]} << 8) |
         std::uint32_t{in[3]};
}

}  // namespace cogledger
