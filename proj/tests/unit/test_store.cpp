#include <gtest/gtest.h>

#include <fstream>

#include "cogledger/store/content_store.hpp"
#include "support.hpp"

using namespace cogledger;
using namespace cogtest;

namespace {

Bytes pattern(std::size_t n) {
  Bytes b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = static_cast<std::uint8_t>((31 * i + 7) % 251);
  return b;
}

void overwrite(const std::filesystem::path& p, const Bytes& data) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
}

}  // namespace

TEST(ContentAddressGolden, RootsMatchIndependentImplementation) {
  auto g = golden("content.json");
  for (const auto& [name, c] : g["cases"].items()) {
    Bytes data = pattern(c["length"].get<std::size_t>());
    ContentAddress a = compute_address(data);
    EXPECT_EQ(a.root.hex(), c["root"].get<std::string>()) << name;
    EXPECT_EQ(a.total_len, data.size()) << name;
  }
}

TEST(ContentAddress, ChunkCountsAtBoundaries) {
  EXPECT_EQ(build_manifest(pattern(0)).chunk_hashes.size(), 0u);
  EXPECT_EQ(build_manifest(pattern(kChunkSize)).chunk_hashes.size(), 1u);
  EXPECT_EQ(build_manifest(pattern(kChunkSize + 1)).chunk_hashes.size(), 2u);
  Bytes one = pattern(1);
  EXPECT_EQ(compute_address(one).root, chunk_hash(one));
}

TEST(ContentAddress, VerifyChecksRootAndLength) {
  Bytes data = pattern(1000);
  ContentAddress a = compute_address(data);
  EXPECT_TRUE(verify(a, data));
  Bytes flipped = data;
  flipped[500] ^= 1;
  EXPECT_FALSE(verify(a, flipped));
  ContentAddress wrong_len = a;
  wrong_len.total_len = 999;
  EXPECT_FALSE(verify(wrong_len, data));
}

TEST(ContentStore, PutGetAndDedup) {
  TempDir dir;
  ContentStore store(dir.path());
  Bytes data = pattern(kChunkSize * 2 + 10);
  ContentAddress a = store.put(data);
  std::size_t chunks = store.chunk_count();
  EXPECT_EQ(chunks, 3u);
  EXPECT_EQ(store.put(data), a);
  EXPECT_EQ(store.chunk_count(), chunks);
  EXPECT_EQ(store.get(a), data);
  EXPECT_TRUE(store.contains(a));
}

TEST(ContentStore, RepeatedChunksStoredOnce) {
  TempDir dir;
  ContentStore store(dir.path());
  Bytes chunk = pattern(kChunkSize);
  Bytes twice = chunk;
  twice.insert(twice.end(), chunk.begin(), chunk.end());
  store.put(twice);
  EXPECT_EQ(store.chunk_count(), 1u);
  store.put(chunk);
  EXPECT_EQ(store.chunk_count(), 1u);
}

TEST(ContentStore, EmptyBlobRoundTrips) {
  TempDir dir;
  ContentStore store(dir.path());
  ContentAddress a = store.put(Bytes{});
  EXPECT_EQ(store.get(a), Bytes{});
}

TEST(ContentStore, UnknownAddressIsNotFound) {
  TempDir dir;
  ContentStore store(dir.path());
  try {
    store.get(compute_address(pattern(10)));
    FAIL() << "expected NotFound";
  } catch (const StoreError& e) {
    EXPECT_EQ(e.code(), StoreErrc::NotFound);
  }
}

TEST(ContentStore, CorruptedChunkIsIntegrityFailure) {
  TempDir dir;
  ContentStore store(dir.path());
  Bytes data = pattern(kChunkSize + 100);
  ContentAddress a = store.put(data);
  ChunkManifest m = build_manifest(data);
  Bytes bad(data.begin() + kChunkSize, data.end());
  bad[3] ^= 0x80;
  overwrite(store.chunk_path(m.chunk_hashes[1]), bad);
  try {
    store.get(a);
    FAIL() << "expected IntegrityFailure";
  } catch (const StoreError& e) {
    EXPECT_EQ(e.code(), StoreErrc::IntegrityFailure);
  }
}

TEST(ContentStore, MissingChunkIsIntegrityFailureOrNotFound) {
  TempDir dir;
  ContentStore store(dir.path());
  Bytes data = pattern(kChunkSize + 100);
  ContentAddress a = store.put(data);
  std::filesystem::remove(store.chunk_path(build_manifest(data).chunk_hashes[0]));
  EXPECT_THROW(store.get(a), StoreError);
}

TEST(ContentStore, CapacityIsEnforced) {
  TempDir dir;
  ContentStore store(dir.path(), 1000);
  store.put(pattern(600));
  try {
    store.put(Bytes(500, 1));
    FAIL() << "expected StorageFull";
  } catch (const StoreError& e) {
    EXPECT_EQ(e.code(), StoreErrc::StorageFull);
  }
  // already-stored content costs nothing
  EXPECT_NO_THROW(store.put(pattern(600)));
  EXPECT_EQ(store.stored_bytes(), 600u);
}

TEST(ContentStore, ReopenSeesExistingContent) {
  TempDir dir;
  Bytes data = pattern(5000);
  ContentAddress a;
  {
    ContentStore store(dir.path());
    a = store.put(data);
  }
  ContentStore again(dir.path());
  EXPECT_EQ(again.get(a), data);
  EXPECT_EQ(again.stored_bytes(), 5000u);
}

TEST(ContentStoreProperty, RandomBlobsRoundTrip) {
  TempDir dir;
  ContentStore store(dir.path());
  Rng rng(77);
  std::vector<std::size_t> sizes = {0, 1, kChunkSize - 1, kChunkSize, kChunkSize + 1};
  for (int i = 0; i < 20; ++i) sizes.push_back(uniform(rng, 0, 3 * kChunkSize));
  for (std::size_t n : sizes) {
    Bytes data = random_bytes_of(rng, n);
    ContentAddress a = store.put(data);
    ASSERT_EQ(a, compute_address(data));
    ASSERT_EQ(store.get(a), data);
    ASSERT_TRUE(verify(a, data));
    if (n > 0) {
      Bytes other = data;
      other[uniform(rng, 0, n - 1)] ^= static_cast<std::uint8_t>(1u << uniform(rng, 0, 7));
      ASSERT_NE(compute_address(other), a);
    }
  }
}
