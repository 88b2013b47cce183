#include "cogledger/learning/preference.hpp"

#include <algorithm>
#include <map>

namespace cogledger::learning {

using u128 = unsigned __int128;

Bytes encode_model(const PreferenceModel& model) {
  Encoder enc;
  enc.u64(model.schema_version);
  enc.count(model.weights.size());
  for (const auto& [term, w] : model.weights) enc.text(term).i64(w.micros);
  enc.count(model.built_from.size());
  for (const auto& id : model.built_from) enc.hash(id);
  return enc.take();
}

PreferenceModel decode_model(ByteView bytes) {
  try {
    Decoder dec(bytes);
    PreferenceModel m;
    m.schema_version = dec.u64();
    std::size_t n = dec.count();
    for (std::size_t i = 0; i < n; ++i) {
      std::string term = dec.text();
      m.weights.emplace_back(std::move(term), Fixed6{dec.i64()});
    }
    n = dec.count();
    for (std::size_t i = 0; i < n; ++i) m.built_from.push_back(dec.tagged<TokenTag>());
    dec.expect_end();
    return m;
  } catch (const DecodeError& e) {
    throw LearningError(LearningErrc::BadPayload, std::string("malformed preference model: ") + e.what());
  }
}

PreferenceModel build_preference_model(std::span<const TrainingObject> objects) {
  std::map<std::string, u128> mass;
  std::vector<TokenId> sources;
  for (const auto& o : objects) {
    if (o.weight.micros <= 0) continue;
    bool contributed = false;
    for (const auto& t : o.payload.vocabulary) {
      if (t.score.micros <= 0) continue;
      mass[t.term] += static_cast<u128>(o.weight.micros) * static_cast<u128>(t.score.micros);
      contributed = true;
    }
    if (contributed) sources.push_back(o.token_id);
  }
  u128 total = 0;
  for (const auto& [term, m] : mass) total += m;
  if (total == 0) throw LearningError(LearningErrc::NoSignal, "no knowledge object carries positive weight");

  struct Share {
    const std::string* term;
    std::int64_t micros;
    u128 remainder;
  };
  std::vector<Share> shares;
  std::int64_t assigned = 0;
  for (const auto& [term, m] : mass) {
    u128 scaled = m * static_cast<u128>(Fixed6::kScale);
    auto q = static_cast<std::int64_t>(scaled / total);
    shares.push_back({&term, q, scaled % total});
    assigned += q;
  }
  std::vector<std::size_t> order(shares.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // `shares` is already in term order, so a stable sort breaks ties by term.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return shares[a].remainder > shares[b].remainder; });
  for (std::int64_t left = Fixed6::kScale - assigned, i = 0; left > 0; --left, ++i)
    ++shares[order[static_cast<std::size_t>(i)]].micros;

  PreferenceModel model;
  for (const auto& s : shares)
    if (s.micros > 0) model.weights.emplace_back(*s.term, Fixed6{s.micros});
  std::sort(sources.begin(), sources.end());
  sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
  model.built_from = std::move(sources);
  return model;
}

Training train_preference_model(std::span<const TrainingObject> objects, const AccountId& owner,
                                const AccountId& trainer, ContentStore& store) {
  Training out;
  out.model = build_preference_model(objects);
  out.model_bytes = encode_model(out.model);
  out.address = store.put(out.model_bytes);

  NftMetadata meta;
  meta.cls = TokenClass::ModelNft;
  meta.content_hash = out.address;
  meta.schema_version = kModelSchemaVersion;
  meta.issuer = trainer;
  out.mint = with_token_id(MintNft{{}, meta, owner});
  return out;
}

double predict_salience(const PreferenceModel& model, std::string_view text) {
  auto tokens = content_tokens(text);
  if (tokens.empty()) return 0.0;
  std::int64_t sum = 0;
  for (const auto& t : tokens) {
    auto it = std::lower_bound(model.weights.begin(), model.weights.end(), t,
                               [](const auto& entry, const std::string& term) { return entry.first < term; });
    if (it != model.weights.end() && it->first == t) sum += it->second.micros;
  }
  return static_cast<double>(sum) / static_cast<double>(Fixed6::kScale) / static_cast<double>(tokens.size());
}

}  // namespace cogledger::learning
