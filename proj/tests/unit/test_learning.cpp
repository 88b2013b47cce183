#include <gtest/gtest.h>

#include <cmath>

#include "cogledger/learning/preference.hpp"
#include "cogledger/learning/quiz.hpp"
#include "cogledger/learning/refine.hpp"
#include "cogledger/memory/history_csv.hpp"
#include "cogledger/text.hpp"
#include "support.hpp"

using namespace cogledger;
using namespace cogledger::learning;
using namespace cogtest;

namespace {

const AccountId kUser = account_of(KeyPair::from_label("learning-user").pub);
const AccountId kAgent = account_of(KeyPair::from_label("learning-agent").pub);
const Hash32 kShell = sha256(std::string_view("learning-shell"));

// Straightforward per-term rescan of the corpus; quadratic but obviously right.
std::vector<TermScore> naive_topics(const std::vector<std::string>& docs, std::size_t k) {
  std::vector<std::vector<std::string>> toks;
  std::vector<std::string> terms;
  for (const auto& d : docs) {
    toks.push_back(content_tokens(d));
    for (const auto& t : toks.back())
      if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);
  }
  std::vector<TermScore> out;
  for (const auto& t : terms) {
    double tf = 0, df = 0;
    for (const auto& ts : toks) {
      auto c = std::count(ts.begin(), ts.end(), t);
      tf += static_cast<double>(c);
      df += c > 0 ? 1 : 0;
    }
    double idf = std::log((1.0 + docs.size()) / (1.0 + df)) + 1.0;
    out.push_back({t, Fixed6{std::llround(tf * idf * 1e6)}});
  }
  std::sort(out.begin(), out.end(), [](const TermScore& a, const TermScore& b) {
    if (a.score.micros != b.score.micros) return a.score.micros > b.score.micros;
    return a.term < b.term;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

ActivityRecord titled(std::string title, std::uint64_t at, AccountId actor = kUser) {
  ActivityRecord r;
  r.actor = actor;
  r.kind = ActivityKind::PageVisit;
  r.url = "https://example.org/" + std::to_string(at);
  r.title = std::move(title);
  r.shell_id = kShell;
  r.captured_at = at;
  return with_record_id(r);
}

KnowledgeObjectPayload vocab_payload(std::vector<std::pair<std::string, std::int64_t>> terms) {
  KnowledgeObjectPayload p;
  for (auto& [t, m] : terms) p.vocabulary.push_back({t, Fixed6{m}});
  p.source_record_ids.push_back(Hash32::zero());
  return p;
}

TokenId tid(std::uint8_t n) {
  TokenId id;
  id.hash.bytes[0] = n;
  return id;
}

std::map<std::string, std::int64_t> as_map(const PreferenceModel& m) {
  std::map<std::string, std::int64_t> out;
  for (const auto& [t, w] : m.weights) out[t] = w.micros;
  return out;
}

LearningErrc learning_error(const std::function<void()>& f) {
  try {
    f();
  } catch (const LearningError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no LearningError thrown";
  return LearningErrc::BadPayload;
}

}  // namespace

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("Hello, World! a I x2"), (std::vector<std::string>{"hello", "world", "x2"}));
  EXPECT_EQ(tokenize("naïve café"), (std::vector<std::string>{"naïve", "café"}));
  EXPECT_EQ(tokenize("rust-lang/async_book"), (std::vector<std::string>{"rust", "lang", "async", "book"}));
  EXPECT_TRUE(tokenize("").empty());
}

TEST(Stopwords, DigestMatchesBundledFile) {
  auto g = golden("learning.json");
  EXPECT_EQ(stopwords_digest().hex(), g["stopwords_sha256"].get<std::string>());
  EXPECT_EQ(stopwords_digest(), sha256(read_text(source_path("data/stopwords.txt"))));
  EXPECT_TRUE(stopwords().contains("the"));
  EXPECT_EQ(content_tokens("the rust and the borrow"), (std::vector<std::string>{"rust", "borrow"}));
}

TEST(Topics, SingleDocumentExample) {
  auto g = golden("tfidf.json");
  std::vector<std::string> docs = {"apple apple banana"};
  auto top = extract_topics(docs, 1);
  ASSERT_EQ(top.size(), 1u);
  EXPECT_EQ(top[0].term, g["apple"]["term"].get<std::string>());
  EXPECT_EQ(top[0].score.micros, g["apple"]["micros"].get<std::int64_t>());
  EXPECT_EQ(top[0].score, Fixed6{2'000'000});
}

TEST(Topics, EmptyCorpus) {
  std::vector<std::string> none;
  EXPECT_TRUE(extract_topics(none, 5).empty());
  std::vector<std::string> stop_only = {"the and of", ""};
  EXPECT_TRUE(extract_topics(stop_only, 5).empty());
}

TEST(Topics, GoldenCorpora) {
  auto g = golden("tfidf.json");
  for (std::size_t i = 0; i < g["corpora"].size(); ++i) {
    const auto& c = g["corpora"][i];
    auto docs = c["docs"].get<std::vector<std::string>>();
    auto got = extract_topics(docs, c["k"].get<std::size_t>());
    ASSERT_EQ(got.size(), c["expected"].size()) << "corpus " << i;
    for (std::size_t j = 0; j < got.size(); ++j) {
      EXPECT_EQ(got[j].term, c["expected"][j]["term"].get<std::string>()) << "corpus " << i << " rank " << j;
      EXPECT_EQ(got[j].score.micros, c["expected"][j]["micros"].get<std::int64_t>()) << "corpus " << i;
    }
  }
}

TEST(TopicsProperty, AgreesWithNaiveRescan) {
  Rng rng(8080);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> docs;
    for (std::uint64_t d = uniform(rng, 0, 12); d > 0; --d) docs.push_back(random_words(rng, 0, 30));
    std::size_t k = uniform(rng, 1, 30);
    ASSERT_EQ(extract_topics(docs, k), naive_topics(docs, k)) << "trial " << trial;
  }
}

TEST(Mentions, CapitalizedRunsAndSentenceStarts) {
  EXPECT_EQ(extract_mentions("The book by Steve Klabnik and Carol Nichols is good.", {}),
            (std::vector<std::string>{"Steve Klabnik", "Carol Nichols"}));
  // a sentence-initial word is never capitalized, so this run is one word long
  EXPECT_TRUE(extract_mentions("Rust Book. Fine.", {}).empty());
  EXPECT_TRUE(extract_mentions("Steve, Klabnik", {}).empty());
  EXPECT_EQ(extract_mentions("read Steve Klabnik, then steve klabnik again and Steve Klabnik", {}),
            (std::vector<std::string>{"Steve Klabnik"}));
}

TEST(Mentions, GazetteerHits) {
  std::set<std::string> gaz = {"Ada Lovelace", "Plato"};
  EXPECT_EQ(extract_mentions("notes on plato and ada lovelace", gaz),
            (std::vector<std::string>{"Plato", "Ada Lovelace"}));
  EXPECT_TRUE(extract_mentions("platonic ideals", gaz).empty());
  EXPECT_EQ(extract_mentions("we met Ada Lovelace today", gaz), (std::vector<std::string>{"Ada Lovelace"}));
}

TEST(Codify, ProducesMintAndReward) {
  TempDir dir;
  ContentStore store(dir.path());
  RegistryState state;
  std::vector<ActivityRecord> recs = {titled("Async Rust ownership", 10), titled("Rust borrow checker", 20)};
  Codification c = codify(recs, kAgent, store, state);
  EXPECT_EQ(c.payload.window_from, 10u);
  EXPECT_EQ(c.payload.window_to, 20u);
  EXPECT_EQ(c.payload.source_record_ids.size(), 2u);
  EXPECT_EQ(c.payload.vocabulary.front().term, "rust");
  EXPECT_EQ(c.payload.stopwords_digest, stopwords_digest());
  EXPECT_EQ(decode_payload(c.payload_bytes), c.payload);
  EXPECT_EQ(store.get(c.address), c.payload_bytes);
  EXPECT_EQ(c.mint.owner, kUser);
  EXPECT_EQ(c.mint.metadata.cls, TokenClass::KnowledgeObjectNft);
  EXPECT_EQ(c.mint.metadata.content_hash, c.address);
  EXPECT_EQ(c.mint.metadata.weight, Fixed6::one());
  EXPECT_EQ(c.mint.token_id, derive_token_id(c.mint));
  const auto& reward = std::get<MintIncentive>(c.incentive);
  EXPECT_EQ(reward.owner, kAgent);
  EXPECT_EQ(reward.amount, 10u);
}

TEST(Codify, DeterministicUnderInputOrder) {
  TempDir d1, d2;
  ContentStore s1(d1.path()), s2(d2.path());
  RegistryState state;
  Rng rng(3);
  std::vector<ActivityRecord> recs;
  for (int i = 0; i < 40; ++i) recs.push_back(titled(random_words(rng, 2, 8), uniform(rng, 1, 1000)));
  Codification a = codify(recs, kAgent, s1, state);
  std::shuffle(recs.begin(), recs.end(), rng);
  Codification b = codify(recs, kAgent, s2, state);
  EXPECT_EQ(a.payload_bytes, b.payload_bytes);
  EXPECT_EQ(a.mint, b.mint);
}

TEST(Codify, Errors) {
  TempDir dir;
  ContentStore store(dir.path());
  RegistryState state;
  std::vector<ActivityRecord> none;
  EXPECT_EQ(learning_error([&] { codify(none, kAgent, store, state); }), LearningErrc::EmptyWindow);
  std::vector<ActivityRecord> stop_only = {titled("the and of", 1)};
  EXPECT_EQ(learning_error([&] { codify(stop_only, kAgent, store, state); }), LearningErrc::EmptyWindow);
  std::vector<ActivityRecord> mixed = {titled("rust", 1), titled("go", 2, kAgent)};
  EXPECT_EQ(learning_error([&] { codify(mixed, kAgent, store, state); }), LearningErrc::MixedActors);
}

TEST(Codify, HistoryFixtureVocabulary) {
  auto g = golden("history.json");
  TempDir dir;
  ContentStore store(dir.path());
  auto import = import_history_csv(read_text(source_path("tests/fixtures/history.csv")), kUser, kShell);
  ASSERT_EQ(import.records.size(), g["rows"].get<std::size_t>());
  CodifyOptions opt;
  opt.k = g["k"].get<std::size_t>();
  Codification c = codify(import.records, kAgent, store, RegistryState{}, opt);
  ASSERT_EQ(c.payload.vocabulary.size(), g["vocabulary"].size());
  for (std::size_t i = 0; i < c.payload.vocabulary.size(); ++i) {
    EXPECT_EQ(c.payload.vocabulary[i].term, g["vocabulary"][i]["term"].get<std::string>());
    EXPECT_EQ(c.payload.vocabulary[i].score.micros, g["vocabulary"][i]["micros"].get<std::int64_t>());
  }
  EXPECT_NE(std::find(c.payload.mentions.begin(), c.payload.mentions.end(), "Steve Klabnik"), c.payload.mentions.end());
}

TEST(Quiz, GoldenAnswers) {
  auto g = golden("learning.json")["quiz"];
  TraitResult r = score_quiz(default_quiz(), g["answers"].get<std::map<std::string, int>>());
  EXPECT_EQ(r.code, g["code"].get<std::string>());
  for (int i = 0; i < 4; ++i) EXPECT_EQ(r.axis_scores[i], g["scores"][i].get<std::int64_t>());
}

TEST(Quiz, ZeroAndBlankPickFirstLetters) {
  EXPECT_EQ(score_quiz(default_quiz(), {}).code, "ESTJ");
  std::map<std::string, int> all_neg;
  for (const auto& q : default_quiz().questions) all_neg[q.id] = -2 * q.polarity;
  EXPECT_EQ(score_quiz(default_quiz(), all_neg).code, "INFP");
}

TEST(Quiz, Errors) {
  EXPECT_EQ(learning_error([] { score_quiz(default_quiz(), {{"nope", 1}}); }), LearningErrc::UnknownQuestion);
  EXPECT_EQ(learning_error([] { score_quiz(default_quiz(), {{"ei1", 3}}); }), LearningErrc::InvalidAnswer);
  EXPECT_EQ(learning_error([] { QuizDefinition::parse_json(R"({"questions": []})"); }), LearningErrc::BadQuizDefinition);
  EXPECT_EQ(learning_error([] {
              QuizDefinition::parse_json(
                  R"({"questions": [{"id": "a", "text": "t", "axis": "EI", "polarity": 1},
                                    {"id": "a", "text": "t", "axis": "SN", "polarity": 1},
                                    {"id": "b", "text": "t", "axis": "TF", "polarity": 1},
                                    {"id": "c", "text": "t", "axis": "JP", "polarity": 1}]})");
            }),
            LearningErrc::BadQuizDefinition);
}

TEST(Quiz, DefinitionRoundTripsThroughJson) {
  QuizDefinition back = QuizDefinition::parse_json(default_quiz().to_json());
  EXPECT_EQ(back.digest(), default_quiz().digest());
  EXPECT_EQ(default_quiz().questions.size(), 8u);
}

// Axis scores are additive in the answers wherever the sum stays in range.
TEST(QuizProperty, ScoresAreLinear) {
  Rng rng(12);
  const auto& def = default_quiz();
  for (int trial = 0; trial < 500; ++trial) {
    std::map<std::string, int> a, b, sum;
    for (const auto& q : def.questions) {
      int x = static_cast<int>(uniform(rng, 0, 2)) - 1;
      int y = static_cast<int>(uniform(rng, 0, 2)) - 1;
      a[q.id] = x;
      b[q.id] = y;
      sum[q.id] = x + y;
    }
    auto ra = score_quiz(def, a), rb = score_quiz(def, b), rs = score_quiz(def, sum);
    for (int i = 0; i < 4; ++i) ASSERT_EQ(rs.axis_scores[i], ra.axis_scores[i] + rb.axis_scores[i]);
  }
}

TEST(Refine, GoldenWeights) {
  auto g = golden("learning.json")["refine"];
  for (const auto& row : g["table"]) {
    double w = refined_weight(row["hits"].get<std::uint64_t>(), row["max_hits"].get<std::uint64_t>(), 1000,
                              1000 + row["age_seconds"].get<std::uint64_t>());
    EXPECT_EQ(Fixed6::from_double(w).micros, row["weight_micros"].get<std::int64_t>()) << row.dump();
  }
  EXPECT_EQ(Fixed6::from_double(refined_weight(0, 0, 0, 30 * 86400)).micros,
            g["one_half_life_micros"].get<std::int64_t>());
}

TEST(Refine, FutureMintClampsToZeroAge) {
  EXPECT_DOUBLE_EQ(refined_weight(0, 0, 5000, 100), 0.5);
}

TEST(Refine, UpdatesAndBurns) {
  const std::uint64_t day = 86400;
  std::vector<RefineInput> in = {
      {tid(1), Fixed6::one(), 0, 10},          // fresh and used: weight stays 1.0
      {tid(2), Fixed6::one(), 0, 0},           // fresh, unused: 0.5
      {tid(3), Fixed6::one(), 0, 0},           // minted long ago, unused: burned
  };
  in[0].mint_time = 400 * day;
  in[1].mint_time = 400 * day;
  RefineOutput out = refine(in, 400 * day);
  ASSERT_EQ(out.updates.size(), 2u);
  EXPECT_EQ(out.updates[0].token_id, tid(2));
  EXPECT_EQ(out.updates[0].new_weight, Fixed6{500000});
  EXPECT_EQ(out.updates[1].token_id, tid(3));
  ASSERT_EQ(out.burns.size(), 1u);
  EXPECT_EQ(out.burns[0].token_id, tid(3));
  EXPECT_EQ(out.burns[0].reason, static_cast<std::uint64_t>(BurnReason::Refinery));
}

TEST(RefineProperty, MonotoneAndBurnIffBelowThreshold) {
  Rng rng(909);
  for (int trial = 0; trial < 1000; ++trial) {
    std::uint64_t max_hits = uniform(rng, 0, 50);
    std::uint64_t hits = max_hits ? uniform(rng, 0, max_hits) : 0;
    std::uint64_t mint = uniform(rng, 0, 1'000'000);
    std::uint64_t now = mint + uniform(rng, 0, 500 * 86400);
    double w = refined_weight(hits, max_hits, mint, now);
    ASSERT_GE(w, 0.0);
    ASSERT_LE(w, 1.0);
    if (hits < max_hits) ASSERT_GE(refined_weight(hits + 1, max_hits, mint, now), w);
    ASSERT_LE(refined_weight(hits, max_hits, mint, now + 3600), w);

    std::vector<RefineInput> in = {{tid(1), Fixed6{static_cast<std::int64_t>(uniform(rng, 0, 1'000'000))}, mint, hits}};
    if (max_hits) in.push_back({tid(2), Fixed6::one(), mint, max_hits});
    RefineOutput out = refine(in, now);
    bool burned = std::any_of(out.burns.begin(), out.burns.end(), [](const Burn& b) { return b.token_id == tid(1); });
    ASSERT_EQ(burned, w < 0.05) << "w=" << w;
  }
}

TEST(Train, GoldenWeights) {
  auto g = golden("learning.json")["train"];
  std::vector<TrainingObject> objs;
  std::uint8_t n = 1;
  for (const auto& o : g["objects"]) {
    std::vector<std::pair<std::string, std::int64_t>> v;
    for (const auto& [t, m] : o["vocabulary"].items()) v.emplace_back(t, m.get<std::int64_t>());
    objs.push_back({tid(n++), vocab_payload(v), Fixed6{o["weight_micros"].get<std::int64_t>()}});
  }
  PreferenceModel m = build_preference_model(objs);
  EXPECT_EQ(as_map(m), (g["weights"].get<std::map<std::string, std::int64_t>>()));
  EXPECT_EQ(m.built_from, (std::vector<TokenId>{tid(1), tid(2)}));
}

TEST(Train, WeightsScaleContributions) {
  std::vector<TrainingObject> objs = {{tid(1), vocab_payload({{"alpha", 1'000'000}}), Fixed6{250000}},
                                      {tid(2), vocab_payload({{"beta", 1'000'000}}), Fixed6{750000}}};
  auto w = as_map(build_preference_model(objs));
  EXPECT_EQ(w["alpha"], 250000);
  EXPECT_EQ(w["beta"], 750000);
}

TEST(Train, NoSignal) {
  std::vector<TrainingObject> none;
  EXPECT_EQ(learning_error([&] { build_preference_model(none); }), LearningErrc::NoSignal);
  std::vector<TrainingObject> zero = {{tid(1), vocab_payload({{"alpha", 5}}), Fixed6{0}}};
  EXPECT_EQ(learning_error([&] { build_preference_model(zero); }), LearningErrc::NoSignal);
}

TEST(Train, ModelRoundTripAndMint) {
  TempDir dir;
  ContentStore store(dir.path());
  std::vector<TrainingObject> objs = {{tid(1), vocab_payload({{"alpha", 3}, {"beta", 1}}), Fixed6::one()}};
  Training t = train_preference_model(objs, kUser, kAgent, store);
  EXPECT_EQ(decode_model(t.model_bytes), t.model);
  EXPECT_EQ(store.get(t.address), t.model_bytes);
  EXPECT_EQ(t.mint.metadata.cls, TokenClass::ModelNft);
  EXPECT_EQ(t.mint.owner, kUser);
  EXPECT_EQ(t.mint.metadata.issuer, kAgent);
  const std::map<std::string, std::int64_t> expected = {{"alpha", 750000}, {"beta", 250000}};
  EXPECT_EQ(as_map(t.model), expected);
}

TEST(TrainProperty, NormalizedScaleInvariantAndPositive) {
  Rng rng(4242);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<TrainingObject> objs;
    std::map<std::string, double> mass;
    for (std::uint64_t i = uniform(rng, 1, 5); i > 0; --i) {
      std::vector<std::pair<std::string, std::int64_t>> v;
      std::set<std::string> used;
      for (std::uint64_t j = uniform(rng, 1, 8); j > 0; --j) {
        std::string t = pick(rng, word_pool());
        if (!used.insert(t).second) continue;
        v.emplace_back(t, static_cast<std::int64_t>(uniform(rng, 1, 30'000'000)));
      }
      auto w = static_cast<std::int64_t>(uniform(rng, 1, 1'000'000));
      for (auto& [t, s] : v) mass[t] += static_cast<double>(w) * static_cast<double>(s);
      objs.push_back({tid(static_cast<std::uint8_t>(i)), vocab_payload(v), Fixed6{w}});
    }
    PreferenceModel m = build_preference_model(objs);
    std::int64_t sum = 0;
    for (const auto& [t, w] : m.weights) {
      ASSERT_GT(w.micros, 0);
      ASSERT_TRUE(mass.contains(t));
      sum += w.micros;
    }
    ASSERT_EQ(sum, 1'000'000);
    ASSERT_TRUE(std::is_sorted(m.weights.begin(), m.weights.end()));

    // doubling every object (same list twice) leaves the shares unchanged
    std::vector<TrainingObject> twice = objs;
    twice.insert(twice.end(), objs.begin(), objs.end());
    ASSERT_EQ(build_preference_model(twice).weights, m.weights);

    // the heaviest term by exact mass carries the largest weight
    auto heaviest = std::max_element(mass.begin(), mass.end(), [](auto& a, auto& b) { return a.second < b.second; });
    std::int64_t top = 0;
    for (const auto& [t, w] : m.weights) top = std::max(top, w.micros);
    ASSERT_EQ(as_map(m)[heaviest->first], top);
  }
}

TEST(Salience, MeanOverContentTokens) {
  auto g = golden("learning.json");
  PreferenceModel m;
  m.weights = {{"rust", Fixed6::one()}};
  EXPECT_NEAR(predict_salience(m, "rust rust go"), g["salience_rust_rust_go"].get<double>(), 1e-9);
  EXPECT_EQ(predict_salience(m, "the and of"), 0.0);
  EXPECT_EQ(predict_salience(m, ""), 0.0);
}

TEST(SalienceProperty, BoundedByModelWeights) {
  Rng rng(31337);
  PreferenceModel m;
  std::int64_t left = 1'000'000;
  for (const auto& t : {"rust", "garden", "ledger", "tokio"}) {
    std::int64_t w = std::min<std::int64_t>(left, static_cast<std::int64_t>(uniform(rng, 1, 400'000)));
    m.weights.emplace_back(t, Fixed6{w});
    left -= w;
  }
  std::sort(m.weights.begin(), m.weights.end());
  for (int trial = 0; trial < 500; ++trial) {
    double s = predict_salience(m, random_words(rng, 0, 20));
    ASSERT_GE(s, 0.0);
    ASSERT_LE(s, 0.4 + 1e-12);
  }
}
