#include "cogledger/learning/text_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cogledger/text.hpp"

namespace cogledger::learning {

namespace detail {
extern const std::string_view kStopwordsText;
}

std::string_view stopwords_text() { return detail::kStopwordsText; }

const std::set<std::string>& stopwords() {
  static const std::set<std::string> words = [] {
    std::set<std::string> out;
    std::string_view text = stopwords_text();
    while (!text.empty()) {
      auto nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      if (!line.empty()) out.emplace(line);
      if (nl == std::string_view::npos) break;
      text.remove_prefix(nl + 1);
    }
    return out;
  }();
  return words;
}

Hash32 stopwords_digest() {
  static const Hash32 digest = sha256(stopwords_text());
  return digest;
}

std::vector<std::string> content_tokens(std::string_view text) {
  auto tokens = tokenize(text);
  const auto& stop = stopwords();
  std::erase_if(tokens, [&](const std::string& t) { return stop.contains(t); });
  return tokens;
}

std::vector<TermScore> extract_topics(std::span<const std::string> docs, std::size_t k) {
  std::map<std::string, std::uint64_t> tf;
  std::map<std::string, std::uint64_t> df;
  for (const auto& doc : docs) {
    auto tokens = content_tokens(doc);
    for (const auto& t : tokens) ++tf[t];
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (const auto& t : tokens) ++df[t];
  }

  const double n = static_cast<double>(docs.size());
  std::vector<TermScore> scored;
  scored.reserve(tf.size());
  for (const auto& [term, count] : tf) {
    double idf = std::log((1.0 + n) / (1.0 + static_cast<double>(df[term]))) + 1.0;
    scored.push_back({term, Fixed6::from_double(static_cast<double>(count) * idf)});
  }
  std::sort(scored.begin(), scored.end(), [](const TermScore& a, const TermScore& b) {
    return a.score != b.score ? a.score > b.score : a.term < b.term;
  });
  if (scored.size() > k) scored.resize(k);
  return scored;
}

namespace {

bool word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

struct Word {
  std::size_t begin;
  std::size_t end;
  bool sentence_start;
  bool joined_to_previous;  // only whitespace since the previous word
};

std::vector<Word> split_words(std::string_view text) {
  std::vector<Word> words;
  std::size_t i = 0;
  std::size_t prev_end = 0;
  while (i < text.size()) {
    if (!word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::size_t begin = i;
    while (i < text.size() && word_byte(static_cast<unsigned char>(text[i]))) ++i;
    std::string_view gap = text.substr(prev_end, begin - prev_end);
    bool sentence_start = words.empty() || gap.find_first_of(".!?") != std::string_view::npos;
    bool joined = !words.empty() && std::all_of(gap.begin(), gap.end(), is_space);
    words.push_back({begin, i, sentence_start, joined});
    prev_end = i;
  }
  return words;
}

}  // namespace

std::vector<std::string> extract_mentions(std::string_view text, const std::set<std::string>& gazetteer) {
  std::vector<std::pair<std::size_t, std::string>> found;

  const std::string lowered = ascii_lower(text);
  for (const auto& name : gazetteer) {
    const std::string needle = ascii_lower(name);
    if (needle.empty()) continue;
    for (std::size_t pos = lowered.find(needle); pos != std::string::npos; pos = lowered.find(needle, pos + 1)) {
      bool left_ok = pos == 0 || !word_byte(static_cast<unsigned char>(lowered[pos - 1]));
      std::size_t end = pos + needle.size();
      bool right_ok = end == lowered.size() || !word_byte(static_cast<unsigned char>(lowered[end]));
      if (left_ok && right_ok) {
        found.emplace_back(pos, name);
        break;
      }
    }
  }

  auto words = split_words(text);
  auto capitalized = [&](const Word& w) { return !w.sentence_start && text[w.begin] >= 'A' && text[w.begin] <= 'Z'; };
  for (std::size_t i = 0; i < words.size();) {
    if (!capitalized(words[i])) {
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < words.size() && capitalized(words[j]) && words[j].joined_to_previous) ++j;
    if (j - i >= 2) {
      std::string mention;
      for (std::size_t w = i; w < j; ++w) {
        if (w > i) mention.push_back(' ');
        mention.append(text.substr(words[w].begin, words[w].end - words[w].begin));
      }
      found.emplace_back(words[i].begin, std::move(mention));
    }
    i = j;
  }

  // Gazetteer hits were added first, so a stable sort keeps them ahead of a
  // capitalized run starting at the same offset.
  std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (auto& [pos, mention] : found)
    if (seen.insert(ascii_lower(mention)).second) out.push_back(std::move(mention));
  return out;
}

}  // namespace cogledger::learning
