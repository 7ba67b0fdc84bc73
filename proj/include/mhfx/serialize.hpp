#pragma once

// JSON encoding of the data model. The schema is documented in
// docs/schema.md.

#include <json.hpp>
#include <string>

#include "mhfx/problem.hpp"

namespace mhfx {

using Json = nlohmann::ordered_json;

Json to_json(const EpsLinear& p);
Json to_json(const EpsSeries& s);
Json to_json(const MHF& m);
Json to_json(const Term& t);
Json to_json(const EpsExpansion& e);
Json to_json(const StepDownOperator& h);
Json to_json(const PrefactorSpec& s);
Json to_json(const Problem& p);
Json to_json(const Number& n, int digits = 25);

// All parsers throw SchemaError naming the offending JSON path.
EpsLinear eps_linear_from_json(const Json& j, const std::string& path = "$");
EpsSeries eps_series_from_json(const Json& j, const std::string& path = "$");
// Validates and returns the canonical form.
MHF mhf_from_json(const Json& j, const std::string& path = "$");
Term term_from_json(const Json& j, const std::string& path = "$");
EpsExpansion expansion_from_json(const Json& j, const std::string& path = "$");
PrefactorSpec prefactor_from_json(const Json& j, const std::string& path = "$");
// {"mhf": ...} or {"sum": [{"prefactor": ..., "mhf": ...}, ...]}
Problem problem_from_json(const Json& j, const std::string& path = "$");
// {"x": "3/10", "y": "11.1-1e-12i"}
EvalPoint point_from_json(const Json& j, const std::string& path = "$");

Json parse_json_text(const std::string& text);
Json read_json_file(const std::string& path);

}  // namespace mhfx
