#include "causalbounds/serialize.hpp"

namespace causalbounds {

Json expression_to_json(const LinearExpression& e) {
  Json j;
  j["text"] = format_expression(e);
  j["constant"] = to_string(e.constant);
  Json coeffs = Json::object();
  for (const auto& [name, c] : e.coefficients) coeffs[name] = to_string(c);
  j["coefficients"] = std::move(coeffs);
  return j;
}

namespace {

Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(ErrorKind::Syntax, "SYNTAX_ERROR", "expected a rational number as string or integer");
}

}  // namespace

LinearExpression expression_from_json(const Json& j) {
  if (j.is_string()) return parse_linear_expression(j.get<std::string>());
  LinearExpression e;
  if (j.contains("constant")) e.constant = rational_from_json(j.at("constant"));
  if (j.contains("coefficients"))
    for (const auto& [name, c] : j.at("coefficients").items()) e.add(name, rational_from_json(c));
  return canonicalize_expression(std::move(e));
}

Json parameter_to_json(const Parameter& p) {
  return Json{{"name", p.name},
              {"interpretation", p.interpretation},
              {"right_values", p.right_values},
              {"left_values", p.left_values}};
}

Parameter parameter_from_json(const Json& j) {
  Parameter p;
  p.name = j.at("name").get<std::string>();
  p.interpretation = j.value("interpretation", p.name);
  if (j.contains("right_values")) p.right_values = j.at("right_values").get<std::vector<int>>();
  if (j.contains("left_values")) p.left_values = j.at("left_values").get<std::vector<int>>();
  return p;
}

Json bounds_to_json(const SymbolicBoundPair& b) {
  Json j;
  j["effect"] = b.effect_text;
  auto list = [](const std::vector<LinearExpression>& xs) {
    Json a = Json::array();
    for (const auto& e : xs) a.push_back(expression_to_json(e));
    return a;
  };
  j["lower"] = list(b.lower);
  j["upper"] = list(b.upper);
  Json params = Json::array();
  for (const auto& p : b.parameters) params.push_back(parameter_to_json(p));
  j["parameters"] = std::move(params);
  j["logs"] = b.logs;
  return j;
}

SymbolicBoundPair bounds_from_json(const Json& j) {
  try {
    SymbolicBoundPair b;
    b.effect_text = j.value("effect", "");
    for (const auto& e : j.at("lower")) b.lower.push_back(expression_from_json(e));
    for (const auto& e : j.at("upper")) b.upper.push_back(expression_from_json(e));
    for (const auto& p : j.at("parameters")) b.parameters.push_back(parameter_from_json(p));
    if (j.contains("logs")) b.logs = j.at("logs").get<std::vector<std::string>>();
    if (b.lower.empty() || b.upper.empty())
      throw Error(ErrorKind::Validation, "INVALID_BOUNDS", "bounds need at least one lower and one upper expression");
    return b;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Syntax, "SYNTAX_ERROR", std::string("malformed bounds object: ") + e.what());
  }
}

Json problem_to_json(const LinearCausalProblem& p) {
  Json j;
  j["graph"] = format_graph_spec(p.graph);
  j["effect"] = p.effect_text;
  Json cons = Json::array();
  for (const auto& c : p.constraints) cons.push_back(format_constraint(c));
  j["constraints"] = std::move(cons);
  Json params = Json::array();
  for (const auto& prm : p.parameters) params.push_back(parameter_to_json(prm));
  j["parameters"] = std::move(params);
  j["q_names"] = p.q_names;
  j["r_matrix"] = p.r_matrix;
  j["constraint_strings"] = p.constraint_strings;
  j["kept_rows"] = p.kept_rows;
  Json obj = Json::array();
  for (const auto& c : p.objective) obj.push_back(to_string(c));
  j["objective"] = std::move(obj);
  j["term_q_names"] = p.term_q_names;
  j["logs"] = p.logs;
  return j;
}

Json simulation_to_json(const SimulationReport& r, bool include_draws) {
  Json j;
  j["seed"] = r.seed;
  j["draws"] = r.draws.size();
  j["violations"] = r.violations;
  j["mean_width"] = r.mean_width;
  j["max_width"] = r.max_width;
  bool paired = !r.draws.empty() && r.draws.front().baseline_lower.has_value();
  if (paired) j["wider_than_baseline"] = r.wider_than_baseline;
  if (include_draws) {
    Json a = Json::array();
    for (const auto& d : r.draws) {
      Json x{{"theta", d.theta}, {"lower", d.lower}, {"upper", d.upper}, {"violation", d.violation}};
      if (d.baseline_lower) {
        x["baseline_lower"] = *d.baseline_lower;
        x["baseline_upper"] = *d.baseline_upper;
      }
      a.push_back(std::move(x));
    }
    j["samples"] = std::move(a);
  }
  return j;
}

std::string error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::Timeout: return "timeout";
    case ErrorKind::Cancelled: return "cancelled";
    case ErrorKind::Internal: return "internal";
  }
  return "internal";
}

Json error_to_json(const Error& e) {
  Json j;
  j["kind"] = error_kind_name(e.kind());
  j["code"] = e.code();
  j["message"] = e.what();
  if (e.where().line > 0) {
    j["line"] = e.where().line;
    j["column"] = e.where().column;
  }
  if (!e.violations().empty()) {
    Json v = Json::array();
    for (const auto& x : e.violations()) v.push_back({{"code", x.code}, {"message", x.message}, {"element", x.element}});
    j["violations"] = std::move(v);
  }
  return j;
}

}  // namespace causalbounds
