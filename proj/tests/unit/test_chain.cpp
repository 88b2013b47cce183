#include <gtest/gtest.h>

#include <algorithm>

#include "cogledger/core/chain_file.hpp"
#include "cogledger/core/merkle.hpp"
#include "support.hpp"
#include "workload.hpp"

using namespace cogledger;
using namespace cogtest;

namespace {

Hash32 h(std::initializer_list<ByteView> parts) {
  Sha256 s;
  for (auto p : parts) s.update(p);
  return s.finish();
}

ByteView tag(const std::uint8_t& t) { return {&t, 1}; }

std::vector<LedgerRecord> activities(std::size_t n, std::uint64_t seed = 1) {
  Rng rng(seed);
  std::vector<LedgerRecord> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_activity(rng, account_of(KeyPair::from_label("a").pub)));
  return out;
}

bool has_kind(const std::vector<Violation>& v, ViolationKind k) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k; });
}

struct SingleValidator {
  KeyPair key = KeyPair::from_label("solo-validator");
  ChainParams params{ValidatorSet({Validator::from_key(key.pub, 1)}), account_of(KeyPair::from_label("owner").pub)};
  Block genesis = make_genesis(params, key);
};

}  // namespace

TEST(Merkle, EmptyIsZero) { EXPECT_EQ(merkle_root({}), Hash32::zero()); }

TEST(Merkle, SingleLeaf) {
  auto recs = activities(1);
  const std::uint8_t t0 = 0;
  Bytes enc = canonical_encode(recs[0]);
  EXPECT_EQ(merkle_root(recs), h({tag(t0), enc}));
}

TEST(Merkle, ThreeLeavesMatchGolden) {
  auto g = golden("encoding.json");
  std::vector<LedgerRecord> recs;
  for (const auto& hex : g["ledger_encodings"]) recs.push_back(decode_record(from_hex(hex.get<std::string>())));
  EXPECT_EQ(merkle_root(std::span(recs).first(1)).hex(), g["merkle_one"].get<std::string>());
  EXPECT_EQ(merkle_root(recs).hex(), g["merkle_three"].get<std::string>());
}

TEST(Merkle, UnpairedNodesArePromotedAtEveryLevel) {
  auto recs = activities(5);
  const std::uint8_t t0 = 0, t1 = 1;
  std::vector<Hash32> l;
  for (const auto& r : recs) l.push_back(h({tag(t0), canonical_encode(r)}));
  auto node = [&](const Hash32& a, const Hash32& b) { return h({tag(t1), a.view(), b.view()}); };
  // level 1: (01)(23)4 -> level 2: (0123) 4 -> root
  Hash32 expected = node(node(node(l[0], l[1]), node(l[2], l[3])), l[4]);
  EXPECT_EQ(merkle_root(recs), expected);
}

TEST(Schedule, SingleValidatorAlwaysChosen) {
  auto v = Validator::from_key(KeyPair::from_label("v").pub, 7);
  for (std::uint64_t height : {0u, 1u, 99u}) EXPECT_EQ(scheduled_validator(std::vector{v}, height), v.id);
}

TEST(Schedule, EqualStakesAlternateInIdOrder) {
  auto a = Validator::from_key(KeyPair::from_label("v1").pub, 1);
  auto b = Validator::from_key(KeyPair::from_label("v2").pub, 1);
  if (b.id < a.id) std::swap(a, b);
  std::vector<Validator> set = {b, a};  // configuration order does not matter
  EXPECT_EQ(scheduled_validator(set, 0), a.id);
  EXPECT_EQ(scheduled_validator(set, 1), b.id);
}

TEST(Schedule, WeightedExpansionHandExpanded) {
  PublicKey k1 = KeyPair::from_label("v1").pub, k2 = KeyPair::from_label("v2").pub;
  if (key_id(k2) < key_id(k1)) std::swap(k1, k2);
  auto a = Validator::from_key(k1, 2);  // A < B by id
  auto b = Validator::from_key(k2, 1);
  std::vector<Validator> set = {b, a};
  std::vector<Hash32> expected = {a.id, a.id, b.id, a.id, a.id, b.id};
  for (std::uint64_t height = 0; height < 6; ++height) EXPECT_EQ(scheduled_validator(set, height), expected[height]);
}

TEST(Schedule, ZeroStakeSkippedUnlessAllZero) {
  auto a = Validator::from_key(KeyPair::from_label("z1").pub, 0);
  auto b = Validator::from_key(KeyPair::from_label("z2").pub, 3);
  for (std::uint64_t height = 0; height < 10; ++height) EXPECT_EQ(scheduled_validator(std::vector{a, b}, height), b.id);
  a.stake = b.stake = 0;
  auto lo = std::min(a.id, b.id), hi = std::max(a.id, b.id);
  EXPECT_EQ(scheduled_validator(std::vector{a, b}, 0), lo);
  EXPECT_EQ(scheduled_validator(std::vector{a, b}, 1), hi);
}

TEST(Schedule, EmptySetRejected) {
  EXPECT_THROW(scheduled_validator(std::vector<Validator>{}, 0), ValidatorSetError);
  EXPECT_THROW(ValidatorSet({}), ValidatorSetError);
}

TEST(Schedule, DuplicateValidatorsRejected) {
  auto v = Validator::from_key(KeyPair::from_label("dup").pub, 1);
  EXPECT_THROW(ValidatorSet({v, v}), ValidatorSetError);
}

TEST(Genesis, ShapeAndSigner) {
  SingleValidator s;
  EXPECT_EQ(s.genesis.header.height, 0u);
  EXPECT_TRUE(s.genesis.header.prev_hash.is_zero());
  EXPECT_EQ(s.genesis.header.timestamp, 0u);
  EXPECT_TRUE(s.genesis.records.empty());
  EXPECT_TRUE(validate_genesis(s.genesis, s.params).empty());
  EXPECT_THROW(make_genesis(s.params, KeyPair::from_label("intruder")), ChainError);
}

TEST(Seal, OneRecordOnGenesis) {
  SingleValidator s;
  Chain chain(s.params, s.genesis);
  auto recs = activities(1);
  Block b = chain.seal(recs, s.key, 1000);
  EXPECT_EQ(b.header.height, 1u);
  EXPECT_EQ(b.header.prev_hash, header_hash(s.genesis.header));
  EXPECT_EQ(b.header.merkle_root, merkle_root(recs));
  EXPECT_EQ(b.header.timestamp, 1000u);
  EXPECT_TRUE(chain.validate(b).empty());
}

TEST(Seal, TimestampNeverGoesBackwards) {
  SingleValidator s;
  Chain chain(s.params, s.genesis);
  chain.append(chain.seal(activities(1, 1), s.key, 5000));
  Block b = chain.seal(activities(1, 2), s.key, 10);
  EXPECT_EQ(b.header.timestamp, 5000u);
}

TEST(Seal, EmptyBlockRejected) {
  SingleValidator s;
  Chain chain(s.params, s.genesis);
  try {
    chain.seal({}, s.key, 1);
    FAIL();
  } catch (const ChainError& e) {
    EXPECT_EQ(e.code(), ChainErrc::EmptyBlock);
  }
}

TEST(Seal, OverflowRejected) {
  SingleValidator s;
  Chain chain(s.params, s.genesis);
  auto recs = activities(1025);
  try {
    chain.seal(recs, s.key, 1);
    FAIL();
  } catch (const ChainError& e) {
    EXPECT_EQ(e.code(), ChainErrc::RecordInvalid);
  }
  EXPECT_NO_THROW(chain.seal(std::span(recs).first(1024), s.key, 1));
}

TEST(Seal, WrongValidatorRejected) {
  SingleValidator s;
  Chain chain(s.params, s.genesis);
  try {
    chain.seal(activities(1), KeyPair::from_label("not-scheduled"), 1);
    FAIL();
  } catch (const ChainError& e) {
    EXPECT_EQ(e.code(), ChainErrc::WrongValidator);
  }
}

TEST(Seal, InvalidRecordReportsIndex) {
  SingleValidator s;
  Chain chain(s.params, s.genesis);
  auto recs = activities(3);
  recs.push_back(recs[1]);  // duplicate activity
  try {
    chain.seal(recs, s.key, 1);
    FAIL();
  } catch (const ChainError& e) {
    EXPECT_EQ(e.code(), ChainErrc::RecordInvalid);
    EXPECT_EQ(e.record_index(), 3u);
  }
}

TEST(Validate, FlippedRecordByteIsMerkleViolation) {
  SingleValidator s;
  Chain chain(s.params, s.genesis);
  Block b = chain.seal(activities(4), s.key, 1);
  auto& rec = std::get<ActivityRecord>(b.records[2]);
  rec.captured_at ^= 1;
  auto v = chain.validate(b);
  EXPECT_TRUE(has_kind(v, ViolationKind::MerkleRoot));
}

TEST(Validate, NonScheduledSignerIsScheduleViolation) {
  World w = World::make();
  Chain chain(w.params, w.genesis);
  auto recs = activities(2);
  const Hash32 scheduled = scheduled_validator(w.params.validators, 1);
  const KeyPair* other = nullptr;
  for (const auto& k : w.validators)
    if (key_id(k.pub) != scheduled) other = &k;
  Block b = chain.seal(recs, w.key_for(scheduled), 1);
  b.header.validator_id = key_id(other->pub);
  b.header.signature = sign(other->secret, signing_bytes(b.header));
  auto v = chain.validate(b);
  EXPECT_TRUE(has_kind(v, ViolationKind::Schedule));
  EXPECT_FALSE(has_kind(v, ViolationKind::Signature));
}

TEST(Validate, ReportsEveryViolation) {
  SingleValidator s;
  Chain chain(s.params, s.genesis);
  Block b = chain.seal(activities(2), s.key, 1);
  b.header.height = 7;
  b.header.prev_hash = Hash32{};
  std::get<ActivityRecord>(b.records[0]).title = "changed";
  auto v = chain.validate(b);
  EXPECT_TRUE(has_kind(v, ViolationKind::Height));
  EXPECT_TRUE(has_kind(v, ViolationKind::Linkage));
  EXPECT_TRUE(has_kind(v, ViolationKind::MerkleRoot));
  EXPECT_TRUE(has_kind(v, ViolationKind::Signature));
  EXPECT_TRUE(has_kind(v, ViolationKind::RecordInvalid));
}

TEST(ForkChoice, Examples) {
  BlockHeader a, b, c;
  a.height = 5;
  b.height = 3;
  EXPECT_EQ(fork_choice(std::vector{a}), a);
  EXPECT_EQ(fork_choice(std::vector{b, a}), a);
  c.height = 5;
  c.timestamp = 1;
  auto smaller = header_hash(a) < header_hash(c) ? a : c;
  EXPECT_EQ(fork_choice(std::vector{a, c}), smaller);
  EXPECT_EQ(fork_choice(std::vector{c, a}), smaller);
  EXPECT_THROW(fork_choice(std::vector<BlockHeader>{}), ChainError);
}

TEST(ForkChoice, PermutationInvariant) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<BlockHeader> heads(uniform(rng, 1, 8));
    for (auto& hd : heads) {
      hd.height = uniform(rng, 0, 3);
      hd.timestamp = rng();
    }
    BlockHeader chosen = fork_choice(heads);
    for (int k = 0; k < 5; ++k) {
      std::shuffle(heads.begin(), heads.end(), rng);
      ASSERT_EQ(fork_choice(heads), chosen);
    }
    for (const auto& hd : heads) {
      ASSERT_LE(hd.height, chosen.height);
      if (hd.height == chosen.height) ASSERT_LE(header_hash(chosen), header_hash(hd));
    }
  }
}

TEST(ChainFile, AppendAndReadBack) {
  TempDir dir;
  World w = World::make();
  Chain chain = build_chain(w, 3, 60, 8);
  ChainFile file(dir / "chain.dat");
  for (const auto& b : chain.blocks()) file.append(b);
  auto back = file.read_all();
  ASSERT_EQ(back.size(), chain.blocks().size());
  EXPECT_EQ(back, chain.blocks());
  EXPECT_TRUE(validate_chain(back, w.params).empty());
}

TEST(ChainFile, TruncatedFrameRejected) {
  World w = World::make();
  Chain chain = build_chain(w, 4, 10, 4);
  Bytes all;
  for (const auto& b : chain.blocks()) {
    Bytes f = frame_block(b);
    all.insert(all.end(), f.begin(), f.end());
  }
  all.pop_back();
  EXPECT_THROW(parse_chain_bytes(all), DecodeError);
}

// Recomputing every header hash and Merkle root from the raw bytes reproduces
// the stored linkage.
TEST(ChainProperty, HashesRecomputeFromBytes) {
  World w = World::make();
  Chain chain = build_chain(w, 8, 300, 12);
  const auto& blocks = chain.blocks();
  for (std::size_t i = 1; i < blocks.size(); ++i) {
    Block reparsed = decode_block(canonical_encode(blocks[i]));
    EXPECT_EQ(reparsed.header.merkle_root, merkle_root(reparsed.records));
    EXPECT_EQ(reparsed.header.prev_hash, header_hash(decode_block(canonical_encode(blocks[i - 1])).header));
  }
}

TEST(ChainProperty, ReplayMatchesIncrementalState) {
  World w = World::make();
  Chain chain = build_chain(w, 21, 400, 15);
  Chain replayed = Chain::replay(w.params, chain.blocks());
  EXPECT_EQ(replayed.state().digest(), chain.state().digest());
  EXPECT_EQ(replayed.state().registry, chain.state().registry);
  EXPECT_EQ(replayed.state().memory, chain.state().memory);
}

// Any single-bit flip in a block's header or body yields at least one
// violation. Exhaustive over every bit of a small chain.
TEST(ChainProperty, EveryBitFlipDetected) {
  World w = World::make();
  Chain chain = build_chain(w, 31, 12, 4);
  std::vector<LedgerState> states;
  {
    LedgerState s = genesis_state(w.genesis, w.params);
    for (std::size_t i = 1; i < chain.blocks().size(); ++i) {
      states.push_back(s);
      advance(s, chain.blocks()[i], w.params);
    }
  }
  std::size_t flips = 0;
  for (std::size_t i = 1; i < chain.blocks().size(); ++i) {
    Bytes enc = canonical_encode(chain.blocks()[i]);
    for (std::size_t byte = 0; byte < enc.size(); ++byte) {
      for (int bit = 0; bit < 8; ++bit) {
        enc[byte] ^= static_cast<std::uint8_t>(1u << bit);
        bool detected = false;
        try {
          Block mutated = decode_block(enc);
          detected = !validate_block(mutated, states[i - 1], w.params).empty();
        } catch (const DecodeError&) {
          detected = true;
        }
        enc[byte] ^= static_cast<std::uint8_t>(1u << bit);
        ASSERT_TRUE(detected) << "block " << i << " byte " << byte << " bit " << bit;
        ++flips;
      }
    }
  }
  EXPECT_GT(flips, 1000u);
}
