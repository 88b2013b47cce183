#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cogledger/learning/codify.hpp"

namespace cogledger::learning {

inline constexpr std::uint64_t kModelSchemaVersion = 1;

struct PreferenceModel {
  std::vector<std::pair<std::string, Fixed6>> weights;  // sorted by term, sums to exactly 1.000000
  std::vector<TokenId> built_from;                      // sorted, unique
  std::uint64_t schema_version = kModelSchemaVersion;

  bool operator==(const PreferenceModel&) const = default;
};

Bytes encode_model(const PreferenceModel& model);
PreferenceModel decode_model(ByteView bytes);

struct TrainingObject {
  TokenId token_id;
  KnowledgeObjectPayload payload;
  Fixed6 weight;
};

// Term mass = sum of object weight * term score, computed exactly on the
// fixed-point integers. Masses are scaled to 1,000,000 micros by largest
// remainder (ties broken by term), so the L1 norm is exactly one. Terms
// that round to zero are dropped. Objects of weight zero do not contribute.
// Errors: NoSignal.
PreferenceModel build_preference_model(std::span<const TrainingObject> objects);

struct Training {
  PreferenceModel model;
  Bytes model_bytes;
  ContentAddress address;
  MintNft mint;  // ModelNft owned by `owner`, issued by `trainer`
};

Training train_preference_model(std::span<const TrainingObject> objects, const AccountId& owner,
                                const AccountId& trainer, ContentStore& store);

// Mean model weight over the content tokens of `text`; 0 when there are none.
double predict_salience(const PreferenceModel& model, std::string_view text);

}  // namespace cogledger::learning
