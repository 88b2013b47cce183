#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "cogledger/store/content_address.hpp"

namespace cogledger {

inline constexpr std::size_t kChunkSize = 256 * 1024;
inline constexpr std::uint64_t kDefaultStoreCapacity = std::uint64_t{1} << 30;
inline constexpr std::uint8_t kChunkTag = 0x02;

enum class StoreErrc { NotFound, IntegrityFailure, StorageFull };

std::string_view to_string(StoreErrc code);

class StoreError : public std::runtime_error {
 public:
  StoreError(StoreErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  StoreErrc code() const { return code_; }

 private:
  StoreErrc code_;
};

struct ChunkManifest {
  std::uint64_t total_len = 0;
  std::uint64_t chunk_size = kChunkSize;
  std::vector<Hash32> chunk_hashes;  // ceil(total_len / chunk_size) entries

  bool operator==(const ChunkManifest&) const = default;
};

void encode(Encoder& enc, const ChunkManifest& m);
ChunkManifest decode_manifest(ByteView bytes);

// H(0x02 || chunk)
Hash32 chunk_hash(ByteView chunk);

ChunkManifest build_manifest(ByteView content);

// One chunk (or none): the chunk hash of the whole content. Several chunks:
// Merkle fold over leaves H(0x00 || chunk_hash).
Hash32 manifest_root(const ChunkManifest& manifest);

ContentAddress compute_address(ByteView content);

// True iff `content` hashes to `addr` (root and length).
bool verify(const ContentAddress& addr, ByteView content);

// Content-addressed blob store on the local filesystem:
//   <root>/chunks/ab/cd/<chunk-hash-hex>
//   <root>/manifests/<root-hash-hex>   (canonical-encoded ChunkManifest)
class ContentStore {
 public:
  explicit ContentStore(std::filesystem::path root, std::uint64_t capacity = kDefaultStoreCapacity);

  // Idempotent; identical content never stores a chunk twice.
  ContentAddress put(ByteView content);

  // Throws StoreError NotFound / IntegrityFailure.
  Bytes get(const ContentAddress& addr) const;

  bool contains(const ContentAddress& addr) const;

  std::size_t chunk_count() const;
  std::uint64_t stored_bytes() const;
  std::uint64_t capacity() const { return capacity_; }

  std::filesystem::path chunk_path(const Hash32& chunk) const;
  std::filesystem::path manifest_path(const Hash32& root) const;

 private:
  void write_file(const std::filesystem::path& path, ByteView data) const;

  std::filesystem::path root_;
  std::uint64_t capacity_;
  mutable std::mutex mu_;
  std::size_t chunk_count_ = 0;
  std::uint64_t stored_bytes_ = 0;
};

}  // namespace cogledger
