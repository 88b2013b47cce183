#pragma once

#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cogledger/learning/text_model.hpp"
#include "cogledger/memory/activity.hpp"
#include "cogledger/store/content_store.hpp"
#include "cogledger/token/registry.hpp"

namespace cogledger::learning {

enum class LearningErrc {
  EmptyWindow,
  MixedActors,
  UnknownQuestion,
  InvalidAnswer,
  BadQuizDefinition,
  NoSignal,
  BadPayload,
};

std::string_view to_string(LearningErrc code);

class LearningError : public std::runtime_error {
 public:
  LearningError(LearningErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  LearningErrc code() const { return code_; }

 private:
  LearningErrc code_;
};

inline constexpr std::uint64_t kPayloadSchemaVersion = 1;

// Codified knowledge: vocabulary, mentions and provenance of an activity window.
struct KnowledgeObjectPayload {
  std::uint64_t schema_version = kPayloadSchemaVersion;
  Hash32 stopwords_digest;
  std::uint64_t window_from = 0;
  std::uint64_t window_to = 0;
  std::vector<TermScore> vocabulary;  // (score desc, term asc), unique terms
  std::vector<std::string> mentions;
  std::vector<Hash32> source_record_ids;  // non-empty

  bool operator==(const KnowledgeObjectPayload&) const = default;
};

Bytes encode_payload(const KnowledgeObjectPayload& payload);
KnowledgeObjectPayload decode_payload(ByteView bytes);

struct CodifyOptions {
  std::size_t k = 20;
  std::set<std::string> gazetteer;
  std::uint64_t reward = kDefaultCodificationReward;
};

struct Codification {
  KnowledgeObjectPayload payload;
  Bytes payload_bytes;
  ContentAddress address;
  MintNft mint;       // KnowledgeObjectNft, weight 1.0, owned by the records' actor
  TokenOp incentive;  // MintIncentive for the agent
};

// Deterministic given (records, agent, options): records are ordered by
// (captured_at, record_id) first. The payload is written to `store`.
// Errors: EmptyWindow (no records or no indexable terms), MixedActors.
Codification codify(std::span<const ActivityRecord> records, const AccountId& agent, ContentStore& store,
                    const RegistryState& state, const CodifyOptions& options = {});

}  // namespace cogledger::learning
