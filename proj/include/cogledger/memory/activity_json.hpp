#pragma once

#include <json.hpp>

#include "cogledger/memory/activity.hpp"

namespace cogledger {

// JSON shape used by the HTTP API and simulator scripts:
//   {"kind": "PageVisit", "url": "...", "title": "...", "dwell_seconds": 12,
//    "query_terms": ["..."], "question_id": "...", "answer_value": 1,
//    "captured_at": 1700000000}
// Absent keys (or null) leave the optional field empty. Actor and shell come
// from the caller's context; record_id is always derived.
// Throws PoolError(ValidationFailed) naming the offending field.
ActivityRecord activity_from_json(const nlohmann::json& body, const AccountId& actor, const Hash32& shell_id,
                                  std::uint64_t default_captured_at);

nlohmann::json activity_to_json(const ActivityRecord& record);

}  // namespace cogledger
