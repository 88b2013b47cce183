#pragma once

// Canonical binary encoding shared by every hashed or signed structure.
//
//   integers      8-byte big-endian (signed values in two's complement)
//   byte strings  4-byte big-endian length, then the bytes
//   text          same as byte strings, UTF-8
//   lists         4-byte big-endian count, then the elements
//   unions/enums  1-byte tag
//   optionals     1-byte presence flag (0 or 1), then the value if present
//   Hash32 / keys raw fixed-width bytes
//
// Decoding is strict: any flag, tag or length that the encoder could not have
// produced is rejected, so decode followed by encode reproduces the input.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cogledger/crypto.hpp"
#include "cogledger/hash.hpp"

namespace cogledger {

class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Encoder {
 public:
  Encoder& u8(std::uint8_t v);
  Encoder& u64(std::uint64_t v);
  Encoder& i64(std::int64_t v) { return u64(static_cast<std::uint64_t>(v)); }
  Encoder& boolean(bool v) { return u8(v ? 1 : 0); }
  Encoder& count(std::size_t n);
  Encoder& bytes(ByteView b);
  Encoder& text(std::string_view s) { return bytes(as_bytes(s)); }
  Encoder& hash(const Hash32& h) { return raw(h.view()); }
  template <class Tag>
  Encoder& hash(const TaggedHash<Tag>& h) {
    return hash(h.hash);
  }
  Encoder& key(const PublicKey& k) { return raw(k.bytes); }
  Encoder& raw(ByteView b);

  template <class T, class F>
  Encoder& optional(const std::optional<T>& v, F&& write) {
    boolean(v.has_value());
    if (v) write(*this, *v);
    return *this;
  }

  const Bytes& buffer() const { return buf_; }
  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

class Decoder {
 public:
  explicit Decoder(ByteView data) : data_(data) {}

  std::uint8_t u8();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  bool boolean();
  std::size_t count();
  Bytes bytes();
  std::string text();
  Hash32 hash();
  template <class Tag>
  TaggedHash<Tag> tagged() {
    return {hash()};
  }
  PublicKey key();

  template <class F>
  auto optional(F&& read) -> std::optional<decltype(read(*this))> {
    if (!boolean()) return std::nullopt;
    return read(*this);
  }

  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }
  bool done() const { return pos_ == data_.size(); }
  void expect_end() const;

 private:
  ByteView take(std::size_t n);

  ByteView data_;
  std::size_t pos_ = 0;
};

// Writes `v` as a 4-byte big-endian integer; used by the chain file framing.
void put_u32_be(Bytes& out, std::uint32_t v);
std::uint32_t get_u32_be(ByteView in);

}  // namespace cogledger
