#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cogledger {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

inline ByteView as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline std::string as_string(ByteView b) {
  return {reinterpret_cast<const char*>(b.data()), b.size()};
}

std::string to_hex(ByteView bytes);

// Throws std::invalid_argument on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

// 32-byte SHA-256 digest. Hex rendering is lowercase, 64 chars.
struct Hash32 {
  std::array<std::uint8_t, 32> bytes{};

  static Hash32 zero() { return {}; }
  static Hash32 from_hex(std::string_view hex);

  bool is_zero() const;
  std::string hex() const { return to_hex(bytes); }
  ByteView view() const { return bytes; }

  auto operator<=>(const Hash32&) const = default;
};

Hash32 sha256(ByteView data);
inline Hash32 sha256(std::string_view s) { return sha256(as_bytes(s)); }

// Incremental SHA-256, used for domain-tagged hashes (tag byte || payload).
class Sha256 {
 public:
  Sha256();
  Sha256& update(ByteView data);
  Sha256& update(std::uint8_t byte);
  Sha256& update(const Hash32& h) { return update(h.view()); }
  Hash32 finish();

 private:
  alignas(16) std::array<std::uint8_t, 128> state_{};
};

// Tagged wrappers so accounts and tokens cannot be mixed up with raw digests.
template <class Tag>
struct TaggedHash {
  Hash32 hash;

  std::string hex() const { return hash.hex(); }
  static TaggedHash from_hex(std::string_view hex) { return {Hash32::from_hex(hex)}; }
  auto operator<=>(const TaggedHash&) const = default;
};

using AccountId = TaggedHash<struct AccountTag>;
using TokenId = TaggedHash<struct TokenTag>;

struct Hash32Hasher {
  std::size_t operator()(const Hash32& h) const noexcept {
    std::size_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | h.bytes[i];
    return v;
  }
};

}  // namespace cogledger
