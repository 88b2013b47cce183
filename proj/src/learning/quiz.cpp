#include "cogledger/learning/quiz.hpp"

#include <json.hpp>
#include <set>

#include "cogledger/encoding.hpp"
#include "cogledger/learning/codify.hpp"

namespace cogledger::learning {

namespace {

constexpr std::array<std::string_view, 4> kAxisNames = {"EI", "SN", "TF", "JP"};

Axis parse_axis(const std::string& name) {
  for (std::size_t i = 0; i < kAxisNames.size(); ++i)
    if (kAxisNames[i] == name) return static_cast<Axis>(i);
  throw LearningError(LearningErrc::BadQuizDefinition, "unknown axis '" + name + "'");
}

void validate(const QuizDefinition& def) {
  std::set<std::string> ids;
  std::array<bool, 4> covered{};
  for (const auto& q : def.questions) {
    if (q.id.empty()) throw LearningError(LearningErrc::BadQuizDefinition, "question id must not be empty");
    if (!ids.insert(q.id).second)
      throw LearningError(LearningErrc::BadQuizDefinition, "duplicate question id '" + q.id + "'");
    if (q.polarity != 1 && q.polarity != -1)
      throw LearningError(LearningErrc::BadQuizDefinition, "polarity must be +1 or -1");
    covered[static_cast<std::size_t>(q.axis)] = true;
  }
  for (std::size_t i = 0; i < covered.size(); ++i)
    if (!covered[i])
      throw LearningError(LearningErrc::BadQuizDefinition,
                          "axis " + std::string(kAxisNames[i]) + " has no questions");
}

}  // namespace

std::string_view to_string(Axis axis) { return kAxisNames.at(static_cast<std::size_t>(axis)); }

QuizDefinition QuizDefinition::parse_json(std::string_view text) {
  QuizDefinition def;
  try {
    auto doc = nlohmann::json::parse(text);
    for (const auto& q : doc.at("questions")) {
      QuizQuestion question;
      question.id = q.at("id").get<std::string>();
      question.text = q.value("text", "");
      question.axis = parse_axis(q.at("axis").get<std::string>());
      question.polarity = q.at("polarity").get<int>();
      def.questions.push_back(std::move(question));
    }
  } catch (const nlohmann::json::exception& e) {
    throw LearningError(LearningErrc::BadQuizDefinition, std::string("malformed quiz definition: ") + e.what());
  }
  validate(def);
  return def;
}

std::string QuizDefinition::to_json() const {
  nlohmann::json qs = nlohmann::json::array();
  for (const auto& q : questions)
    qs.push_back({{"id", q.id}, {"text", q.text}, {"axis", to_string(q.axis)}, {"polarity", q.polarity}});
  return nlohmann::json{{"questions", qs}}.dump();
}

const QuizQuestion* QuizDefinition::find(std::string_view id) const {
  for (const auto& q : questions)
    if (q.id == id) return &q;
  return nullptr;
}

Hash32 QuizDefinition::digest() const {
  Encoder enc;
  enc.count(questions.size());
  for (const auto& q : questions)
    enc.text(q.id).text(q.text).u8(static_cast<std::uint8_t>(q.axis)).i64(q.polarity);
  return sha256(enc.buffer());
}

TraitResult score_quiz(const QuizDefinition& def, const std::map<std::string, int>& answers) {
  TraitResult result;
  for (const auto& [id, value] : answers) {
    const QuizQuestion* q = def.find(id);
    if (!q) throw LearningError(LearningErrc::UnknownQuestion, "unknown question '" + id + "'");
    if (value < -2 || value > 2)
      throw LearningError(LearningErrc::InvalidAnswer, "answer for '" + id + "' must be in [-2, 2]");
    result.axis_scores[static_cast<std::size_t>(q->axis)] += static_cast<std::int64_t>(value) * q->polarity;
  }
  for (std::size_t i = 0; i < 4; ++i) {
    std::string_view letters = kAxisNames[i];
    result.code.push_back(result.axis_scores[i] < 0 ? letters[1] : letters[0]);
  }
  return result;
}

const QuizDefinition& default_quiz() {
  static const QuizDefinition quiz = QuizDefinition::parse_json(R"({"questions": [
    {"id": "ei1", "text": "I recharge by spending time with other people.", "axis": "EI", "polarity": 1},
    {"id": "ei2", "text": "I prefer a quiet evening alone to a party.", "axis": "EI", "polarity": -1},
    {"id": "sn1", "text": "I trust concrete facts more than hunches.", "axis": "SN", "polarity": 1},
    {"id": "sn2", "text": "I often think about possibilities that do not exist yet.", "axis": "SN", "polarity": -1},
    {"id": "tf1", "text": "I decide with logic before feelings.", "axis": "TF", "polarity": 1},
    {"id": "tf2", "text": "Harmony in a group matters more to me than being right.", "axis": "TF", "polarity": -1},
    {"id": "jp1", "text": "I like to have a plan and stick to it.", "axis": "JP", "polarity": 1},
    {"id": "jp2", "text": "I keep my options open as long as possible.", "axis": "JP", "polarity": -1}
  ]})");
  return quiz;
}

}  // namespace cogledger::learning
