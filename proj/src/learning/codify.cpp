#include "cogledger/learning/codify.hpp"

#include <algorithm>

#include "cogledger/text.hpp"

namespace cogledger::learning {

std::string_view to_string(LearningErrc code) {
  switch (code) {
    case LearningErrc::EmptyWindow: return "EmptyWindow";
    case LearningErrc::MixedActors: return "MixedActors";
    case LearningErrc::UnknownQuestion: return "UnknownQuestion";
    case LearningErrc::InvalidAnswer: return "InvalidAnswer";
    case LearningErrc::BadQuizDefinition: return "BadQuizDefinition";
    case LearningErrc::NoSignal: return "NoSignal";
    case LearningErrc::BadPayload: return "BadPayload";
  }
  return "Unknown";
}

Bytes encode_payload(const KnowledgeObjectPayload& p) {
  Encoder enc;
  enc.u64(p.schema_version).hash(p.stopwords_digest).u64(p.window_from).u64(p.window_to);
  enc.count(p.vocabulary.size());
  for (const auto& t : p.vocabulary) enc.text(t.term).i64(t.score.micros);
  enc.count(p.mentions.size());
  for (const auto& m : p.mentions) enc.text(m);
  enc.count(p.source_record_ids.size());
  for (const auto& id : p.source_record_ids) enc.hash(id);
  return enc.take();
}

KnowledgeObjectPayload decode_payload(ByteView bytes) {
  try {
    Decoder dec(bytes);
    KnowledgeObjectPayload p;
    p.schema_version = dec.u64();
    p.stopwords_digest = dec.hash();
    p.window_from = dec.u64();
    p.window_to = dec.u64();
    std::size_t n = dec.count();
    for (std::size_t i = 0; i < n; ++i) {
      TermScore t;
      t.term = dec.text();
      t.score = Fixed6{dec.i64()};
      p.vocabulary.push_back(std::move(t));
    }
    n = dec.count();
    for (std::size_t i = 0; i < n; ++i) p.mentions.push_back(dec.text());
    n = dec.count();
    for (std::size_t i = 0; i < n; ++i) p.source_record_ids.push_back(dec.hash());
    dec.expect_end();
    return p;
  } catch (const DecodeError& e) {
    throw LearningError(LearningErrc::BadPayload, std::string("malformed knowledge payload: ") + e.what());
  }
}

Codification codify(std::span<const ActivityRecord> input, const AccountId& agent, ContentStore& store,
                    const RegistryState& state, const CodifyOptions& options) {
  if (input.empty()) throw LearningError(LearningErrc::EmptyWindow, "no records in window");
  std::vector<ActivityRecord> records(input.begin(), input.end());
  for (const auto& r : records)
    if (r.actor != records.front().actor)
      throw LearningError(LearningErrc::MixedActors, "records belong to more than one actor");
  std::sort(records.begin(), records.end(), [](const ActivityRecord& a, const ActivityRecord& b) {
    return a.captured_at != b.captured_at ? a.captured_at < b.captured_at : a.record_id < b.record_id;
  });

  std::vector<std::string> docs;
  for (const auto& r : records) {
    std::string doc = r.title.value_or("");
    if (r.query_terms)
      for (const auto& term : *r.query_terms) doc += " " + term;
    if (!doc.empty()) docs.push_back(std::move(doc));
  }

  KnowledgeObjectPayload payload;
  payload.stopwords_digest = stopwords_digest();
  payload.window_from = records.front().captured_at;
  payload.window_to = records.back().captured_at;
  payload.vocabulary = extract_topics(docs, options.k);
  if (payload.vocabulary.empty())
    throw LearningError(LearningErrc::EmptyWindow, "window has no indexable terms");

  std::set<std::string> seen;
  for (const auto& r : records) {
    if (!r.title) continue;
    for (auto& m : extract_mentions(*r.title, options.gazetteer))
      if (seen.insert(ascii_lower(m)).second) payload.mentions.push_back(std::move(m));
  }
  for (const auto& r : records) payload.source_record_ids.push_back(r.record_id);

  Codification out;
  out.payload_bytes = encode_payload(payload);
  out.address = store.put(out.payload_bytes);
  out.payload = std::move(payload);

  NftMetadata meta;
  meta.cls = TokenClass::KnowledgeObjectNft;
  meta.content_hash = out.address;
  meta.schema_version = kPayloadSchemaVersion;
  meta.weight = Fixed6::one();
  meta.issuer = agent;
  out.mint = with_token_id(MintNft{{}, meta, records.front().actor});
  out.incentive = reward_codification(state, agent, options.reward);
  return out;
}

}  // namespace cogledger::learning
