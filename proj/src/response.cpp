#include "causalbounds/response.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace causalbounds {

namespace {

constexpr std::size_t kNoSlot = std::numeric_limits<std::size_t>::max();
constexpr std::uint64_t kMaxFunctions = std::uint64_t{1} << 40;

}  // namespace

std::uint64_t ResponseEntry::assignment_index(std::span<const int> parent_values) const {
  std::uint64_t k = 0;
  for (std::size_t j = 0; j < parent_values.size(); ++j)
    k = k * static_cast<std::uint64_t>(parent_cardinalities[j]) + static_cast<std::uint64_t>(parent_values[j]);
  return k;
}

int ResponseEntry::digit(std::uint64_t index, std::uint64_t k) const {
  const auto base = static_cast<std::uint64_t>(cardinality);
  for (std::uint64_t i = 0; i < k; ++i) index /= base;
  return static_cast<int>(index % base);
}

int ResponseEntry::evaluate(std::uint64_t index, std::span<const int> parent_values) const {
  return digit(index, assignment_index(parent_values));
}

ResponseFunctionTable::ResponseFunctionTable(const CausalGraph& g) : graph_(g) {
  if (!graph_.augmented()) graph_ = ensure_augmented(graph_);
  auto report = validate_graph(graph_);
  if (!report.ok()) throw validation_error(report);

  const auto& vars = graph_.variables();
  slot_by_variable_.assign(vars.size(), kNoSlot);
  for (auto i : graph_.observed()) {
    slot_by_variable_[i] = slots_.size();
    slots_.push_back(i);
  }
  for (std::size_t s = 0; s < slots_.size(); ++s) {
    ResponseEntry e;
    e.variable = slots_[s];
    e.parents = graph_.observed_parents(e.variable);
    e.cardinality = vars[e.variable].cardinality;
    e.assignments = 1;
    for (auto p : e.parents) {
      e.parent_cardinalities.push_back(vars[p].cardinality);
      e.assignments *= static_cast<std::uint64_t>(vars[p].cardinality);
      if (e.assignments > 64)
        throw Error(ErrorKind::Validation, "TOO_MANY_RESPONSE_FUNCTIONS",
                    "variable '" + vars[e.variable].name + "' has too many parent configurations");
    }
    e.count = 1;
    for (std::uint64_t k = 0; k < e.assignments; ++k) {
      e.count *= static_cast<std::uint64_t>(e.cardinality);
      if (e.count > kMaxFunctions)
        throw Error(ErrorKind::Validation, "TOO_MANY_RESPONSE_FUNCTIONS",
                    "variable '" + vars[e.variable].name + "' has more than 2^40 response functions");
    }
    entries_.push_back(std::move(e));
    (vars[slots_[s]].side == Side::Right ? right_slots_ : left_slots_).push_back(s);
  }
}

std::optional<std::size_t> ResponseFunctionTable::slot_of(std::size_t variable) const {
  if (variable >= slot_by_variable_.size() || slot_by_variable_[variable] == kNoSlot) return std::nullopt;
  return slot_by_variable_[variable];
}

const ResponseEntry& ResponseFunctionTable::entry(std::size_t variable) const {
  auto s = slot_of(variable);
  if (!s)
    throw Error(ErrorKind::Validation, "LATENT_VARIABLE",
                "variable '" + graph_.variable(variable).name + "' is latent and has no response function");
  return entries_[*s];
}

std::uint64_t ResponseFunctionTable::right_joint_count() const {
  std::uint64_t n = 1;
  for (auto s : right_slots_) n *= entries_[s].count;
  return n;
}

namespace {

int natural_value(const ResponseFunctionTable& t, const ResponseVector& r, std::size_t slot,
                  const PinnedValues* pinned, std::vector<int>& memo) {
  if (memo[slot] >= 0) return memo[slot];
  if (pinned && slot < pinned->size() && (*pinned)[slot]) return memo[slot] = *(*pinned)[slot];
  const auto& e = t.entry_for_slot(slot);
  std::vector<int> values;
  values.reserve(e.parents.size());
  for (auto p : e.parents) values.push_back(natural_value(t, r, *t.slot_of(p), pinned, memo));
  return memo[slot] = e.evaluate(r.index[slot], values);
}

const Intervention* find_intervention(std::span<const Intervention> list, const std::string& name) {
  for (const auto& iv : list)
    if (iv.variable == name) return &iv;
  return nullptr;
}

int value_under(const ResponseFunctionTable& t, const ResponseVector& r, std::size_t variable,
                std::span<const Intervention> interventions, const PinnedValues* pinned) {
  const auto& g = t.graph();
  if (const auto* iv = find_intervention(interventions, g.variable(variable).name)) {
    if (iv->is_constant()) return *iv->value;
    return value_under(t, r, variable, iv->nested, pinned);
  }
  auto slot = t.slot_of(variable);
  if (!slot) throw Error(ErrorKind::Validation, "LATENT_VARIABLE", "cannot evaluate latent '" + g.variable(variable).name + "'");
  if (pinned && *slot < pinned->size() && (*pinned)[*slot]) return *(*pinned)[*slot];
  const auto& e = t.entry_for_slot(*slot);
  std::vector<int> values;
  values.reserve(e.parents.size());
  for (auto p : e.parents) values.push_back(value_under(t, r, p, interventions, pinned));
  return e.evaluate(r.index[*slot], values);
}

void collect_dependencies(const CausalGraph& g, std::size_t variable, std::span<const Intervention> interventions,
                          std::set<std::size_t>& out) {
  if (const auto* iv = find_intervention(interventions, g.variable(variable).name)) {
    if (!iv->is_constant()) collect_dependencies(g, variable, iv->nested, out);
    return;
  }
  if (g.variable(variable).latent) return;
  out.insert(variable);
  for (auto p : g.observed_parents(variable)) collect_dependencies(g, p, interventions, out);
}

}  // namespace

int eval_response(const ResponseFunctionTable& t, const ResponseVector& r, std::size_t variable,
                  const PinnedValues* pinned) {
  std::vector<int> memo(t.size(), -1);
  auto slot = t.slot_of(variable);
  if (!slot) throw Error(ErrorKind::Validation, "LATENT_VARIABLE", "cannot evaluate a latent variable");
  return natural_value(t, r, *slot, pinned, memo);
}

int eval_response_under_intervention(const ResponseFunctionTable& t, const ResponseVector& r, std::size_t variable,
                                     std::span<const Intervention> interventions, const PinnedValues* pinned) {
  if (interventions.empty()) return eval_response(t, r, variable, pinned);
  return value_under(t, r, variable, interventions, pinned);
}

int eval_counterfactual(const ResponseFunctionTable& t, const ResponseVector& r, const CounterfactualVariable& v,
                        const PinnedValues* pinned) {
  return eval_response_under_intervention(t, r, t.graph().index_of(v.variable), v.interventions, pinned);
}

std::vector<std::size_t> counterfactual_dependencies(const CausalGraph& g, const CounterfactualVariable& v) {
  std::set<std::size_t> out;
  collect_dependencies(g, g.index_of(v.variable), v.interventions, out);
  return {out.begin(), out.end()};
}

std::vector<PinnedValues> left_configurations(const ResponseFunctionTable& t) {
  std::vector<PinnedValues> out;
  const auto& left = t.left_slots();
  std::vector<int> digits(left.size(), 0);
  while (true) {
    PinnedValues pv(t.size());
    for (std::size_t k = 0; k < left.size(); ++k) pv[left[k]] = digits[k];
    out.push_back(std::move(pv));
    std::size_t k = left.size();
    while (k > 0) {
      --k;
      if (++digits[k] < t.entry_for_slot(left[k]).cardinality) break;
      digits[k] = 0;
      if (k == 0) return out;
    }
    if (left.empty()) return out;
  }
}

bool constraint_holds(const ResponseFunctionTable& t, const ResponseVector& r, const ConstraintStatement& c,
                      const PinnedValues* pinned) {
  int lhs = eval_counterfactual(t, r, c.lhs, pinned);
  int rhs = std::holds_alternative<int>(c.rhs) ? std::get<int>(c.rhs)
                                               : eval_counterfactual(t, r, std::get<CounterfactualVariable>(c.rhs), pinned);
  switch (c.relation) {
    case Relation::Equal: return lhs == rhs;
    case Relation::LessEqual: return lhs <= rhs;
    case Relation::GreaterEqual: return lhs >= rhs;
    case Relation::Less: return lhs < rhs;
    case Relation::Greater: return lhs > rhs;
  }
  return false;
}

namespace {

void check_not_latent(const CausalGraph& g, const CounterfactualVariable& v, const ConstraintStatement& c) {
  auto check = [&](const std::string& name, auto&& self, const std::vector<Intervention>& ivs) -> void {
    if (g.variable(name).latent)
      throw Error(ErrorKind::Validation, "LATENT_IN_CONSTRAINT",
                  "line " + std::to_string(c.line) + ": constraint references latent variable '" + name + "'",
                  {c.line, 0});
    for (const auto& iv : ivs) self(iv.variable, self, iv.nested);
  };
  check(v.variable, check, v.interventions);
}

bool monotone_ok(const ResponseEntry& e, std::uint64_t index, std::size_t parent_pos) {
  std::vector<int> a(e.parents.size(), 0);
  for (std::uint64_t k = 0; k < e.assignments; ++k) {
    // decode k into a (first parent most significant)
    std::uint64_t rest = k;
    for (std::size_t j = e.parents.size(); j-- > 0;) {
      a[j] = static_cast<int>(rest % static_cast<std::uint64_t>(e.parent_cardinalities[j]));
      rest /= static_cast<std::uint64_t>(e.parent_cardinalities[j]);
    }
    if (a[parent_pos] + 1 >= e.parent_cardinalities[parent_pos]) continue;
    int here = e.evaluate(index, a);
    ++a[parent_pos];
    int up = e.evaluate(index, a);
    if (up < here) return false;
  }
  return true;
}

}  // namespace

AdmissibleSets admissible_response_indices(const ResponseFunctionTable& t,
                                           const std::vector<ConstraintStatement>& constraints) {
  const auto& g = t.graph();
  AdmissibleSets out;
  out.per_slot.resize(t.size());
  for (std::size_t s = 0; s < t.size(); ++s) {
    const auto& e = t.entry_for_slot(s);
    if (e.count > (std::uint64_t{1} << 24))
      throw Error(ErrorKind::Validation, "TOO_MANY_RESPONSE_FUNCTIONS",
                  "variable '" + g.variable(e.variable).name + "' has too many response functions to enumerate");
    auto& set = out.per_slot[s];
    for (std::uint64_t n = 0; n < e.count; ++n) {
      bool ok = true;
      for (std::size_t j = 0; j < e.parents.size() && ok; ++j)
        if (g.is_monotone_edge(e.parents[j], e.variable)) ok = monotone_ok(e, n, j);
      if (ok) set.push_back(n);
    }
  }

  auto configs = left_configurations(t);
  for (const auto& c : constraints) {
    check_not_latent(g, c.lhs, c);
    std::set<std::size_t> deps;
    for (auto d : counterfactual_dependencies(g, c.lhs)) deps.insert(d);
    if (auto* cf = std::get_if<CounterfactualVariable>(&c.rhs)) {
      check_not_latent(g, *cf, c);
      for (auto d : counterfactual_dependencies(g, *cf)) deps.insert(d);
    }
    std::vector<std::size_t> right_deps;
    for (auto d : deps)
      if (g.variable(d).side == Side::Right) right_deps.push_back(*t.slot_of(d));
    if (right_deps.empty())
      throw Error(ErrorKind::Validation, "UNSUPPORTED_CONSTRAINT",
                  "line " + std::to_string(c.line) + ": constraint '" + format_constraint(c) +
                      "' does not involve any right-side response function",
                  {c.line, 0});
    if (right_deps.size() > 1) {
      out.joint.push_back(c);
      continue;
    }
    const auto slot = right_deps.front();
    ResponseVector r{std::vector<std::uint64_t>(t.size(), 0)};
    std::erase_if(out.per_slot[slot], [&](std::uint64_t n) {
      r.index[slot] = n;
      for (const auto& cfg : configs)
        if (!constraint_holds(t, r, c, &cfg)) return true;
      return false;
    });
  }

  for (std::size_t s = 0; s < t.size(); ++s)
    if (out.per_slot[s].empty())
      throw Error(ErrorKind::Infeasible, "INFEASIBLE_ASSUMPTIONS",
                  "no response function of '" + g.variable(t.slots()[s]).name +
                      "' satisfies the monotonicity assumptions and constraints");
  return out;
}

}  // namespace causalbounds
