#pragma once

#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cogledger/fixed_point.hpp"
#include "cogledger/hash.hpp"

namespace cogledger::learning {

// Bundled stopword list (one lowercase token per line).
std::string_view stopwords_text();
const std::set<std::string>& stopwords();
// SHA-256 of the stopword file; recorded in every knowledge-object payload.
Hash32 stopwords_digest();

// tokenize() with stopwords removed.
std::vector<std::string> content_tokens(std::string_view text);

struct TermScore {
  std::string term;
  Fixed6 score;
  bool operator==(const TermScore&) const = default;
};

// TF-IDF over `docs`: tf is the raw count in the concatenated corpus,
// idf(t) = ln((1 + N) / (1 + df(t))) + 1. Scores are rounded to 6 decimals and
// the top k are returned by (score desc, term asc).
std::vector<TermScore> extract_topics(std::span<const std::string> docs, std::size_t k);

// Person/entity candidates in first-appearance order, deduplicated
// case-insensitively:
//  - case-insensitive whole-word hits of gazetteer names (returned as listed);
//  - runs of >= 2 whitespace-separated capitalized words, where a word that
//    starts a sentence never counts as capitalized.
std::vector<std::string> extract_mentions(std::string_view text, const std::set<std::string>& gazetteer);

}  // namespace cogledger::learning
