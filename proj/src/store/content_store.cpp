#include "cogledger/store/content_store.hpp"

#include <fstream>
#include <iterator>
#include <system_error>

#include "cogledger/core/merkle.hpp"
#include "cogledger/crypto.hpp"

namespace fs = std::filesystem;

namespace cogledger {

std::string_view to_string(StoreErrc code) {
  switch (code) {
    case StoreErrc::NotFound: return "NotFound";
    case StoreErrc::IntegrityFailure: return "IntegrityFailure";
    case StoreErrc::StorageFull: return "StorageFull";
  }
  return "Unknown";
}

void encode(Encoder& enc, const ChunkManifest& m) {
  enc.u64(m.total_len).u64(m.chunk_size).count(m.chunk_hashes.size());
  for (const auto& h : m.chunk_hashes) enc.hash(h);
}

ChunkManifest decode_manifest(ByteView bytes) {
  Decoder dec(bytes);
  ChunkManifest m;
  m.total_len = dec.u64();
  m.chunk_size = dec.u64();
  std::size_t n = dec.count();
  for (std::size_t i = 0; i < n; ++i) m.chunk_hashes.push_back(dec.hash());
  dec.expect_end();
  return m;
}

Hash32 chunk_hash(ByteView chunk) { return Sha256().update(kChunkTag).update(chunk).finish(); }

ChunkManifest build_manifest(ByteView content) {
  ChunkManifest m;
  m.total_len = content.size();
  for (std::size_t off = 0; off < content.size(); off += kChunkSize)
    m.chunk_hashes.push_back(chunk_hash(content.subspan(off, std::min(kChunkSize, content.size() - off))));
  return m;
}

Hash32 manifest_root(const ChunkManifest& m) {
  if (m.chunk_hashes.empty()) return chunk_hash({});
  if (m.chunk_hashes.size() == 1) return m.chunk_hashes.front();
  std::vector<Hash32> leaves;
  leaves.reserve(m.chunk_hashes.size());
  for (const auto& h : m.chunk_hashes) leaves.push_back(merkle_leaf(h.view()));
  return merkle_fold(std::move(leaves));
}

ContentAddress compute_address(ByteView content) {
  return {manifest_root(build_manifest(content)), content.size()};
}

bool verify(const ContentAddress& addr, ByteView content) { return compute_address(content) == addr; }

namespace {

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::system_error(errno, std::generic_category(), "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

ContentStore::ContentStore(fs::path root, std::uint64_t capacity) : root_(std::move(root)), capacity_(capacity) {
  fs::create_directories(root_ / "chunks");
  fs::create_directories(root_ / "manifests");
  for (const auto& entry : fs::recursive_directory_iterator(root_ / "chunks")) {
    if (!entry.is_regular_file() || entry.path().extension() == ".tmp") continue;
    ++chunk_count_;
    stored_bytes_ += entry.file_size();
  }
}

fs::path ContentStore::chunk_path(const Hash32& chunk) const {
  std::string hex = chunk.hex();
  return root_ / "chunks" / hex.substr(0, 2) / hex.substr(2, 2) / hex;
}

fs::path ContentStore::manifest_path(const Hash32& root) const { return root_ / "manifests" / root.hex(); }

void ContentStore::write_file(const fs::path& path, ByteView data) const {
  fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::system_error(errno, std::generic_category(), "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

ContentAddress ContentStore::put(ByteView content) {
  ChunkManifest manifest = build_manifest(content);
  ContentAddress addr{manifest_root(manifest), content.size()};

  std::lock_guard lock(mu_);
  std::uint64_t new_bytes = 0;
  std::vector<std::size_t> missing;
  for (std::size_t i = 0; i < manifest.chunk_hashes.size(); ++i) {
    if (fs::exists(chunk_path(manifest.chunk_hashes[i]))) continue;
    bool repeated = false;
    for (auto j : missing) repeated = repeated || manifest.chunk_hashes[j] == manifest.chunk_hashes[i];
    if (repeated) continue;
    missing.push_back(i);
    new_bytes += std::min<std::uint64_t>(kChunkSize, content.size() - i * kChunkSize);
  }
  if (stored_bytes_ + new_bytes > capacity_)
    throw StoreError(StoreErrc::StorageFull, "content store capacity exceeded");

  for (auto i : missing) {
    std::size_t off = i * kChunkSize;
    write_file(chunk_path(manifest.chunk_hashes[i]), content.subspan(off, std::min(kChunkSize, content.size() - off)));
    ++chunk_count_;
  }
  stored_bytes_ += new_bytes;

  fs::path mpath = manifest_path(addr.root);
  if (!fs::exists(mpath)) {
    Encoder enc;
    encode(enc, manifest);
    write_file(mpath, enc.buffer());
  }
  return addr;
}

Bytes ContentStore::get(const ContentAddress& addr) const {
  fs::path mpath = manifest_path(addr.root);
  if (!fs::exists(mpath)) throw StoreError(StoreErrc::NotFound, "no content for " + addr.root.hex());

  ChunkManifest manifest;
  try {
    manifest = decode_manifest(read_file(mpath));
  } catch (const DecodeError&) {
    throw StoreError(StoreErrc::IntegrityFailure, "manifest for " + addr.root.hex() + " is corrupt");
  }
  if (manifest.total_len != addr.total_len)
    throw StoreError(StoreErrc::NotFound, "no content of that length for " + addr.root.hex());

  Bytes out;
  out.reserve(manifest.total_len);
  for (const auto& h : manifest.chunk_hashes) {
    fs::path p = chunk_path(h);
    if (!fs::exists(p)) throw StoreError(StoreErrc::IntegrityFailure, "chunk " + h.hex() + " is missing");
    Bytes chunk = read_file(p);
    if (chunk_hash(chunk) != h) throw StoreError(StoreErrc::IntegrityFailure, "chunk " + h.hex() + " is corrupt");
    out.insert(out.end(), chunk.begin(), chunk.end());
  }
  if (!verify(addr, out))
    throw StoreError(StoreErrc::IntegrityFailure, "content does not hash to " + addr.root.hex());
  return out;
}

bool ContentStore::contains(const ContentAddress& addr) const {
  try {
    get(addr);
    return true;
  } catch (const StoreError&) {
    return false;
  }
}

std::size_t ContentStore::chunk_count() const {
  std::lock_guard lock(mu_);
  return chunk_count_;
}

std::uint64_t ContentStore::stored_bytes() const {
  std::lock_guard lock(mu_);
  return stored_bytes_;
}

}  // namespace cogledger
