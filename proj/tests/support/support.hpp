#pragma once

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>

#include "cogledger/core/chain.hpp"
#include "cogledger/memory/activity.hpp"

#ifndef COGLEDGER_SOURCE_DIR
#error "COGLEDGER_SOURCE_DIR must point at the repository root"
#endif

namespace cogtest {

using namespace cogledger;

inline std::filesystem::path source_path(const std::string& rel) {
  return std::filesystem::path(COGLEDGER_SOURCE_DIR) / rel;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

inline nlohmann::json golden(const std::string& name) {
  return nlohmann::json::parse(read_text(source_path("tests/golden/" + name)));
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("cogtest-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

using Rng = std::mt19937_64;

inline std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[uniform(rng, 0, v.size() - 1)];
}

inline Hash32 random_hash(Rng& rng) {
  Hash32 h;
  for (auto& b : h.bytes) b = static_cast<std::uint8_t>(rng());
  return h;
}

inline Bytes random_bytes_of(Rng& rng, std::size_t n) {
  Bytes b(n);
  for (auto& x : b) x = static_cast<std::uint8_t>(rng());
  return b;
}

inline const std::vector<std::string>& word_pool() {
  static const std::vector<std::string> words = {
      "rust",   "async",  "garden", "tomato", "chain",   "ledger", "token", "model", "quiz", "news",
      "recipe", "soup",   "travel", "paris",  "python",  "data",   "the",   "and",   "of",   "review",
      "guide",  "tips",   "music",  "jazz",   "history", "rome",   "block", "hash",  "café", "x"};
  return words;
}

inline std::string random_words(Rng& rng, std::size_t min_words, std::size_t max_words) {
  std::string s;
  std::size_t n = uniform(rng, min_words, max_words);
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += uniform(rng, 0, 5) == 0 ? ", " : " ";
    std::string w = pick(rng, word_pool());
    if (uniform(rng, 0, 6) == 0 && !w.empty()) w[0] = static_cast<char>(std::toupper(w[0]));
    s += w;
  }
  return s;
}

// A valid activity record of a random kind.
inline ActivityRecord random_activity(Rng& rng, const AccountId& actor, std::uint64_t t_lo = 1'600'000'000,
                                      std::uint64_t t_hi = 1'700'000'000) {
  ActivityRecord r;
  r.actor = actor;
  r.kind = static_cast<ActivityKind>(uniform(rng, 0, 4));
  r.captured_at = uniform(rng, t_lo, t_hi);
  if (uniform(rng, 0, 3)) r.shell_id = random_hash(rng);
  const std::string host = pick(rng, word_pool()) + ".example";
  switch (r.kind) {
    case ActivityKind::PageVisit:
    case ActivityKind::Bookmark:
      r.url = "https://" + host + "/p/" + std::to_string(rng() % 100000);
      if (uniform(rng, 0, 4)) r.title = random_words(rng, 1, 6);
      if (uniform(rng, 0, 1)) r.dwell_seconds = static_cast<std::int64_t>(uniform(rng, 0, 3600));
      break;
    case ActivityKind::Search: {
      std::vector<std::string> terms;
      std::size_t n = uniform(rng, 1, 4);
      for (std::size_t i = 0; i < n; ++i) terms.push_back(pick(rng, word_pool()));
      r.query_terms = terms;
      break;
    }
    case ActivityKind::QuizAnswer:
      r.question_id = "q" + std::to_string(uniform(rng, 1, 12));
      r.answer_value = static_cast<std::int64_t>(uniform(rng, 0, 4)) - 2;
      break;
    case ActivityKind::ShellEvent:
      if (uniform(rng, 0, 1)) r.title = random_words(rng, 1, 3);
      if (uniform(rng, 0, 1)) r.url = "https://" + host + "/";
      break;
  }
  return with_record_id(std::move(r));
}

}  // namespace cogtest
