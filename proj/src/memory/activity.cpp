#include "cogledger/memory/activity.hpp"

#include <array>

namespace cogledger {

namespace {

constexpr std::array<std::string_view, kActivityKindCount> kKindNames = {
    "PageVisit", "Search", "Bookmark", "QuizAnswer", "ShellEvent"};

void encode_body(Encoder& enc, const ActivityRecord& r) {
  enc.hash(r.actor);
  enc.u8(static_cast<std::uint8_t>(r.kind));
  enc.optional(r.url, [](Encoder& e, const std::string& s) { e.text(s); });
  enc.optional(r.title, [](Encoder& e, const std::string& s) { e.text(s); });
  enc.optional(r.dwell_seconds, [](Encoder& e, std::int64_t v) { e.i64(v); });
  enc.optional(r.query_terms, [](Encoder& e, const std::vector<std::string>& terms) {
    e.count(terms.size());
    for (const auto& t : terms) e.text(t);
  });
  enc.optional(r.question_id, [](Encoder& e, const std::string& s) { e.text(s); });
  enc.optional(r.answer_value, [](Encoder& e, std::int64_t v) { e.i64(v); });
  enc.hash(r.shell_id);
  enc.u64(r.captured_at);
}

}  // namespace

std::string_view to_string(ActivityKind kind) { return kKindNames.at(static_cast<std::size_t>(kind)); }

std::optional<ActivityKind> parse_activity_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i)
    if (kKindNames[i] == name) return static_cast<ActivityKind>(i);
  return std::nullopt;
}

void encode(Encoder& enc, const ActivityRecord& r) {
  enc.hash(r.record_id);
  encode_body(enc, r);
}

ActivityRecord decode_activity(Decoder& dec) {
  ActivityRecord r;
  r.record_id = dec.hash();
  r.actor = dec.tagged<AccountTag>();
  std::uint8_t kind = dec.u8();
  if (kind >= kActivityKindCount) throw DecodeError("unknown activity kind");
  r.kind = static_cast<ActivityKind>(kind);
  r.url = dec.optional([](Decoder& d) { return d.text(); });
  r.title = dec.optional([](Decoder& d) { return d.text(); });
  r.dwell_seconds = dec.optional([](Decoder& d) { return d.i64(); });
  r.query_terms = dec.optional([](Decoder& d) {
    std::size_t n = d.count();
    std::vector<std::string> terms;
    for (std::size_t i = 0; i < n; ++i) terms.push_back(d.text());
    return terms;
  });
  r.question_id = dec.optional([](Decoder& d) { return d.text(); });
  r.answer_value = dec.optional([](Decoder& d) { return d.i64(); });
  r.shell_id = dec.hash();
  r.captured_at = dec.u64();
  return r;
}

Hash32 derive_record_id(const ActivityRecord& record) {
  Encoder enc;
  encode_body(enc, record);
  return sha256(enc.buffer());
}

ActivityRecord with_record_id(ActivityRecord record) {
  record.record_id = derive_record_id(record);
  return record;
}

std::optional<FieldViolation> validate_activity(const ActivityRecord& r) {
  switch (r.kind) {
    case ActivityKind::PageVisit:
    case ActivityKind::Bookmark:
      if (!r.url || r.url->empty()) return FieldViolation{"url", "required for " + std::string(to_string(r.kind))};
      break;
    case ActivityKind::Search:
      if (!r.query_terms || r.query_terms->empty())
        return FieldViolation{"query_terms", "Search requires at least one query term"};
      break;
    case ActivityKind::QuizAnswer:
      if (!r.question_id || r.question_id->empty())
        return FieldViolation{"question_id", "QuizAnswer requires question_id"};
      if (!r.answer_value) return FieldViolation{"answer_value", "QuizAnswer requires answer_value"};
      if (*r.answer_value < -2 || *r.answer_value > 2)
        return FieldViolation{"answer_value", "must be in [-2, 2]"};
      break;
    case ActivityKind::ShellEvent:
      break;
  }
  if (r.dwell_seconds && *r.dwell_seconds < 0) return FieldViolation{"dwell_seconds", "must be >= 0"};
  if (r.record_id != derive_record_id(r)) return FieldViolation{"record_id", "does not match record contents"};
  return std::nullopt;
}

}  // namespace cogledger
