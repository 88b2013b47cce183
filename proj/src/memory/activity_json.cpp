#include "cogledger/memory/activity_json.hpp"

#include "cogledger/memory/pool.hpp"

namespace cogledger {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& reason) {
  throw PoolError(PoolErrc::ValidationFailed, field, field + ": " + reason);
}

const json* field(const json& body, const char* name) {
  auto it = body.find(name);
  if (it == body.end() || it->is_null()) return nullptr;
  return &*it;
}

std::optional<std::string> text_field(const json& body, const char* name) {
  const json* v = field(body, name);
  if (!v) return std::nullopt;
  if (!v->is_string()) bad(name, "must be a string");
  return v->get<std::string>();
}

std::optional<std::int64_t> int_field(const json& body, const char* name) {
  const json* v = field(body, name);
  if (!v) return std::nullopt;
  if (!v->is_number_integer()) bad(name, "must be an integer");
  return v->get<std::int64_t>();
}

}  // namespace

ActivityRecord activity_from_json(const json& body, const AccountId& actor, const Hash32& shell_id,
                                  std::uint64_t default_captured_at) {
  if (!body.is_object()) bad("body", "must be a JSON object");
  ActivityRecord r;
  r.actor = actor;
  r.shell_id = shell_id;

  auto kind_name = text_field(body, "kind");
  if (!kind_name) bad("kind", "required");
  auto kind = parse_activity_kind(*kind_name);
  if (!kind) bad("kind", "unknown activity kind '" + *kind_name + "'");
  r.kind = *kind;

  r.url = text_field(body, "url");
  r.title = text_field(body, "title");
  r.dwell_seconds = int_field(body, "dwell_seconds");
  if (const json* terms = field(body, "query_terms")) {
    if (!terms->is_array()) bad("query_terms", "must be an array of strings");
    std::vector<std::string> out;
    for (const auto& t : *terms) {
      if (!t.is_string()) bad("query_terms", "must be an array of strings");
      out.push_back(t.get<std::string>());
    }
    r.query_terms = std::move(out);
  }
  r.question_id = text_field(body, "question_id");
  r.answer_value = int_field(body, "answer_value");

  if (const json* at = field(body, "captured_at")) {
    if (!at->is_number_unsigned() && !(at->is_number_integer() && at->get<std::int64_t>() >= 0))
      bad("captured_at", "must be a non-negative integer");
    r.captured_at = at->get<std::uint64_t>();
  } else {
    r.captured_at = default_captured_at;
  }

  r = with_record_id(std::move(r));
  if (auto v = validate_activity(r)) bad(v->field, v->reason);
  return r;
}

json activity_to_json(const ActivityRecord& r) {
  json out = json::object();
  out["record_id"] = r.record_id.hex();
  out["actor"] = r.actor.hex();
  out["kind"] = to_string(r.kind);
  if (r.url) out["url"] = *r.url;
  if (r.title) out["title"] = *r.title;
  if (r.dwell_seconds) out["dwell_seconds"] = *r.dwell_seconds;
  if (r.query_terms) out["query_terms"] = *r.query_terms;
  if (r.question_id) out["question_id"] = *r.question_id;
  if (r.answer_value) out["answer_value"] = *r.answer_value;
  out["shell_id"] = r.shell_id.hex();
  out["captured_at"] = r.captured_at;
  return out;
}

}  // namespace cogledger
