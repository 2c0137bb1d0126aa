#pragma once

#include <json.hpp>

#include "causalbounds/bounds.hpp"
#include "causalbounds/problem.hpp"

namespace causalbounds {

using Json = nlohmann::ordered_json;

/// {"text", "constant", "coefficients": {name: "n/d"}}; rationals as strings.
Json expression_to_json(const LinearExpression& e);
LinearExpression expression_from_json(const Json& j);

/// {"effect", "lower": [...], "upper": [...], "parameters": [...], "logs"}.
Json bounds_to_json(const SymbolicBoundPair& b);
SymbolicBoundPair bounds_from_json(const Json& j);

Json parameter_to_json(const Parameter& p);
Parameter parameter_from_json(const Json& j);

/// Everything needed to inspect the linear program: names, R as integer rows,
/// the objective and the parameter interpretations.
Json problem_to_json(const LinearCausalProblem& p);

Json simulation_to_json(const SimulationReport& r, bool include_draws = false);

/// {"kind", "code", "message", "line"?, "column"?, "violations"?}
Json error_to_json(const Error& e);
std::string error_kind_name(ErrorKind k);

}  // namespace causalbounds
