#pragma once

// Internal JSON encoders/decoders for the trace-format sub-objects.
// Decoders throw ParseError with a field path; callers prepend file/line.

#include <string>

#include "json.hpp"

#include "improver/trace_model.hpp"

namespace improver::codec {

using nlohmann::json;

json term_to_json(const TermPtr& t);
TermPtr term_from_json(const json& j, const std::string& path);

json goal_to_json(const Goal& g);
Goal goal_from_json(const std::string& id, const json& j, const std::string& path);

json step_to_json(const TacticStep& s);
TacticStep step_from_json(const json& j, const std::string& path);

json record_to_json(const TheoremRecord& r);
TheoremRecord record_from_json(const json& j);

json goals_to_json(const std::map<std::string, Goal>& goals);
std::map<std::string, Goal> goals_from_json(const json& j, const std::string& path);

json candidate_to_json(const CandidateProof& c, bool withTrace);
CandidateProof candidate_from_json(const json& j, const std::string& path);

// Typed field access with path-carrying errors.
const json& require(const json& j, const char* key, const std::string& path);
std::string require_string(const json& j, const char* key, const std::string& path);
int require_int(const json& j, const char* key, const std::string& path);

}  // namespace improver::codec
