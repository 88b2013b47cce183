#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cogledger/hash.hpp"

namespace cogledger::learning {

// The four MBTI dichotomies. A positive axis score selects the first letter.
enum class Axis : std::uint8_t { EI = 0, SN = 1, TF = 2, JP = 3 };

std::string_view to_string(Axis axis);

struct QuizQuestion {
  std::string id;
  std::string text;
  Axis axis = Axis::EI;
  int polarity = 1;  // +1 or -1
};

// Quiz file format (JSON):
//   {"questions": [{"id": "q1", "text": "...", "axis": "EI", "polarity": 1}, ...]}
// Ids are unique and every axis has at least one question.
struct QuizDefinition {
  std::vector<QuizQuestion> questions;

  static QuizDefinition parse_json(std::string_view json);
  std::string to_json() const;
  const QuizQuestion* find(std::string_view id) const;
  Hash32 digest() const;
};

struct TraitResult {
  std::string code;  // e.g. "ESTJ"
  std::array<std::int64_t, 4> axis_scores{};

  bool operator==(const TraitResult&) const = default;
};

// axis score = sum of answer * polarity; score > 0 -> first letter, < 0 ->
// second letter, 0 -> first letter. Unanswered questions count as 0.
// Errors: UnknownQuestion, InvalidAnswer (outside [-2, 2]).
TraitResult score_quiz(const QuizDefinition& def, const std::map<std::string, int>& answers);

// The eight-question quiz bundled with the node.
const QuizDefinition& default_quiz();

}  // namespace cogledger::learning
