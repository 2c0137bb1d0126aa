#include "causalbounds/problem.hpp"

#include <algorithm>
#include <sstream>

namespace causalbounds {

std::string value_digits(const std::vector<int>& values) {
  std::string out;
  for (int v : values) out += v < 10 ? std::string(1, static_cast<char>('0' + v)) : "[" + std::to_string(v) + "]";
  return out;
}

namespace {

std::vector<int> parse_digits(std::string_view s, bool& ok) {
  std::vector<int> out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] >= '0' && s[i] <= '9') {
      out.push_back(s[i] - '0');
      ++i;
    } else if (s[i] == '[') {
      auto close = s.find(']', i);
      if (close == std::string_view::npos) {
        ok = false;
        return out;
      }
      out.push_back(std::stoi(std::string(s.substr(i + 1, close - i - 1))));
      i = close + 1;
    } else {
      ok = false;
      return out;
    }
  }
  return out;
}

struct NameKey {
  bool parsed = false;
  std::vector<int> right_rev, left_rev;
};

NameKey name_key(const std::string& name) {
  NameKey k;
  if (name.size() < 2 || name[0] != 'p') return k;
  std::string_view body(name);
  body.remove_prefix(1);
  auto us = body.find('_');
  bool ok = true;
  k.right_rev = parse_digits(body.substr(0, us), ok);
  if (us != std::string_view::npos) k.left_rev = parse_digits(body.substr(us + 1), ok);
  if (!ok || k.right_rev.empty()) return {};
  std::reverse(k.right_rev.begin(), k.right_rev.end());
  std::reverse(k.left_rev.begin(), k.left_rev.end());
  k.parsed = true;
  return k;
}

}  // namespace

bool parameter_name_less(const std::string& a, const std::string& b) {
  auto ka = name_key(a), kb = name_key(b);
  if (ka.parsed != kb.parsed) return ka.parsed;  // scheme names first
  if (!ka.parsed) return a < b;
  if (ka.right_rev.size() != kb.right_rev.size() || ka.left_rev.size() != kb.left_rev.size()) return a < b;
  if (ka.right_rev != kb.right_rev) return ka.right_rev < kb.right_rev;
  return ka.left_rev < kb.left_rev;
}

bool LinearCausalProblem::same_problem(const LinearCausalProblem& o) const {
  return graph == o.graph && constraints == o.constraints && admissible == o.admissible && gammas == o.gammas &&
         q_names == o.q_names && parameters == o.parameters && r_matrix == o.r_matrix &&
         constraint_strings == o.constraint_strings && kept_rows == o.kept_rows && effect == o.effect &&
         effect_text == o.effect_text && objective == o.objective && term_q_names == o.term_q_names;
}

namespace {

// All assignments of the given variables, lexicographic with the first
// variable most significant.
std::vector<std::vector<int>> assignments(const CausalGraph& g, const std::vector<std::size_t>& vars) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(vars.size(), 0);
  while (true) {
    out.push_back(cur);
    std::size_t k = vars.size();
    while (k > 0) {
      --k;
      if (++cur[k] < g.variable(vars[k]).cardinality) break;
      cur[k] = 0;
      if (k == 0) return out;
    }
    if (vars.empty()) return out;
  }
}

std::string describe(const CausalGraph& g, const std::vector<std::size_t>& vars, const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ", ";
    out += g.variable(vars[i]).name + " = " + std::to_string(values[i]);
  }
  return out;
}

}  // namespace

std::vector<Parameter> enumerate_parameters(const CausalGraph& g) {
  auto right = g.observed(Side::Right);
  auto left = g.observed(Side::Left);
  std::vector<Parameter> out;
  for (const auto& rv : assignments(g, right)) {
    for (const auto& lv : assignments(g, left)) {
      Parameter p;
      p.right_values = rv;
      p.left_values = lv;
      p.name = "p" + value_digits(rv);
      if (!left.empty()) p.name += "_" + value_digits(lv);
      p.interpretation = "P(" + describe(g, right, rv);
      if (!left.empty()) p.interpretation += " | " + describe(g, left, lv);
      p.interpretation += ")";
      out.push_back(std::move(p));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Parameter& a, const Parameter& b) { return parameter_name_less(a.name, b.name); });
  return out;
}

ConstraintMatrix create_constraint_matrix(const ResponseFunctionTable& t, const AdmissibleSets& admissible,
                                          const std::vector<Parameter>& parameters, const CancelToken& cancel) {
  const auto& right = t.right_slots();
  const auto& g = t.graph();
  auto configs = left_configurations(t);

  std::uint64_t total = 1;
  for (auto s : right) {
    total *= admissible.per_slot[s].size();
    if (total > (std::uint64_t{1} << 20))
      throw Error(ErrorKind::Validation, "PROBLEM_TOO_LARGE",
                  "more than 2^20 joint right-side response vectors; the linear program is too large");
  }

  ConstraintMatrix out;
  std::vector<std::size_t> counter(right.size(), 0);
  ResponseVector r{std::vector<std::uint64_t>(t.size(), 0)};
  if (!right.empty() || total == 1) {
    while (true) {
      for (std::size_t k = 0; k < right.size(); ++k) r.index[right[k]] = admissible.per_slot[right[k]][counter[k]];
      bool ok = true;
      for (const auto& c : admissible.joint) {
        for (const auto& cfg : configs)
          if (!constraint_holds(t, r, c, &cfg)) {
            ok = false;
            break;
          }
        if (!ok) break;
      }
      if (ok) {
        std::string name = "q";
        for (std::size_t k = 0; k < right.size(); ++k) {
          if (k) name += "_";
          name += std::to_string(r.index[right[k]]);
        }
        out.gammas.push_back(r);
        out.q_names.push_back(std::move(name));
      }
      std::size_t k = right.size();
      bool done = true;
      while (k > 0) {
        --k;
        if (++counter[k] < admissible.per_slot[right[k]].size()) {
          done = false;
          break;
        }
        counter[k] = 0;
      }
      if (done) break;
      if ((out.gammas.size() & 1023) == 0) cancel.throw_if_stopped();
    }
  }
  if (out.gammas.empty())
    throw Error(ErrorKind::Infeasible, "INFEASIBLE_ASSUMPTIONS",
                "no joint response vector satisfies the constraints");

  const std::size_t cols = out.gammas.size();
  out.r_matrix.assign(parameters.size() + 1, std::vector<int>(cols, 0));
  std::fill(out.r_matrix[0].begin(), out.r_matrix[0].end(), 1);

  // Each left configuration pins the left-side values; a column contributes
  // to the parameter whose right values it produces.
  std::vector<std::size_t> right_vars;
  for (auto s : right) right_vars.push_back(t.slots()[s]);
  std::vector<std::size_t> left_vars;
  for (auto s : t.left_slots()) left_vars.push_back(t.slots()[s]);
  auto param_index = [&](const std::vector<int>& rv, const std::vector<int>& lv) -> std::size_t {
    for (std::size_t j = 0; j < parameters.size(); ++j)
      if (parameters[j].right_values == rv && parameters[j].left_values == lv) return j;
    throw Error(ErrorKind::Internal, "INTERNAL", "parameter lookup failed");
  };
  std::vector<std::vector<std::size_t>> lookup(configs.size());
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t ci = 0; ci < configs.size(); ++ci) {
      std::vector<int> rv, lv;
      for (auto v : right_vars) rv.push_back(eval_response(t, out.gammas[c], v, &configs[ci]));
      for (auto s : t.left_slots()) lv.push_back(*configs[ci][s]);
      out.r_matrix[1 + param_index(rv, lv)][c] = 1;
    }
  }
  (void)g;

  auto render = [&](const std::string& lhs, const std::vector<int>& row) {
    std::string s = lhs + " =";
    bool any = false;
    for (std::size_t c = 0; c < cols; ++c)
      if (row[c]) {
        s += (any ? " + " : " ") + out.q_names[c];
        any = true;
      }
    if (!any) s += " 0";
    return s;
  };
  out.constraint_strings.push_back(render("1", out.r_matrix[0]));
  for (std::size_t j = 0; j < parameters.size(); ++j)
    out.constraint_strings.push_back(render(parameters[j].name, out.r_matrix[1 + j]));
  return out;
}

EffectVector create_effect_vector(const ResponseFunctionTable& t, const std::vector<ResponseVector>& gammas,
                                  const std::vector<std::string>& q_names, const EffectQuery& q) {
  auto configs = left_configurations(t);
  EffectVector out;
  out.objective.assign(gammas.size(), Rational(0));
  out.term_q_names.resize(q.terms.size());
  for (std::size_t ti = 0; ti < q.terms.size(); ++ti) {
    const auto& term = q.terms[ti];
    for (std::size_t c = 0; c < gammas.size(); ++c) {
      std::optional<bool> holds;
      for (const auto& cfg : configs) {
        bool h = std::all_of(term.events.begin(), term.events.end(), [&](const OutcomeEvent& ev) {
          return eval_counterfactual(t, gammas[c], ev.target, &cfg) == ev.value;
        });
        if (holds && *holds != h) {
          ValidationReport report;
          report.add("LEFT_DEPENDENT_QUERY",
                     "term " + std::to_string(ti + 1) + " depends on the left-side variables' distribution",
                     format_effect(EffectQuery{{term}}));
          throw validation_error(report);
        }
        holds = h;
      }
      if (*holds) {
        out.objective[c] += term.coefficient;
        out.term_q_names[ti].push_back(q_names[c]);
      }
    }
  }
  return out;
}

namespace {

void attach_effect(LinearCausalProblem& p, const std::string& effect_text) {
  std::string text = effect_text;
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    auto def = default_effect_text(p.graph);
    if (!def)
      throw Error(ErrorKind::Validation, "MISSING_EFFECT",
                  "no effect given and the graph does not flag an exposure and an outcome");
    text = *def;
  }
  p.effect = parse_effect(text, p.graph);
  auto report = validate_effect(p.effect, p.graph);
  if (!report.ok()) throw validation_error(report);
  p.effect_text = format_effect(p.effect);
  auto ev = create_effect_vector(*p.table, p.gammas, p.q_names, p.effect);
  p.objective = std::move(ev.objective);
  p.term_q_names = std::move(ev.term_q_names);
}

}  // namespace

LinearCausalProblem analyze_graph(const CausalGraph& g, const std::string& constraints_text,
                                  const std::string& effect_text, const CancelToken& cancel) {
  LinearCausalProblem p;
  p.graph = ensure_augmented(g);
  auto table = std::make_shared<ResponseFunctionTable>(p.graph);
  p.table = table;
  p.constraints = parse_constraints(constraints_text, p.graph);
  p.admissible = admissible_response_indices(*table, p.constraints);
  p.parameters = enumerate_parameters(p.graph);

  auto cm = create_constraint_matrix(*table, p.admissible, p.parameters, cancel);
  p.gammas = std::move(cm.gammas);
  p.q_names = std::move(cm.q_names);
  p.r_matrix = std::move(cm.r_matrix);
  p.constraint_strings = std::move(cm.constraint_strings);

  RationalMatrix rm;
  for (const auto& row : p.r_matrix) {
    RationalVector r;
    r.reserve(row.size());
    for (int v : row) r.emplace_back(v);
    rm.push_back(std::move(r));
  }
  p.kept_rows = independent_rows(rm);

  attach_effect(p, effect_text);

  std::ostringstream log;
  log << "response vectors: " << p.columns() << " of " << table->right_joint_count() << " admissible";
  p.logs.push_back(log.str());
  p.logs.push_back("parameters: " + std::to_string(p.parameters.size()) + ", constraint rows: " +
                   std::to_string(p.r_matrix.size()) + ", independent rows: " + std::to_string(p.kept_rows.size()));
  return p;
}

LinearCausalProblem update_effect(const LinearCausalProblem& p, const std::string& effect_text) {
  LinearCausalProblem out = p;
  attach_effect(out, effect_text);
  return out;
}

}  // namespace causalbounds
