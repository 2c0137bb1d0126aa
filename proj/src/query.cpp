#include "causalbounds/query.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>

#include "causalbounds/response.hpp"

namespace causalbounds {

namespace {

enum class Tok { Ident, Int, LBrace, RBrace, LParen, RParen, Comma, Eq, Plus, Minus, Star, Slash, Le, Ge, Lt, Gt, End };

struct Token {
  Tok kind;
  std::string text;
  int column;
};

std::string describe(const Token& t) { return t.kind == Tok::End ? "end of input" : "'" + t.text + "'"; }

std::vector<Token> lex(std::string_view s, int line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    int col = static_cast<int>(i) + 1;
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (std::isalpha(c)) {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), col});
      i = j;
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Int, std::string(s.substr(i, j - i)), col});
      i = j;
      continue;
    }
    // UTF-8 for the relation symbols written in the literature.
    if (s.substr(i, 3) == "\xE2\x89\xA5") {
      out.push_back({Tok::Ge, ">=", col});
      i += 3;
      continue;
    }
    if (s.substr(i, 3) == "\xE2\x89\xA4") {
      out.push_back({Tok::Le, "<=", col});
      i += 3;
      continue;
    }
    auto two = s.substr(i, 2);
    if (two == "<=" || two == ">=") {
      out.push_back({two == "<=" ? Tok::Le : Tok::Ge, std::string(two), col});
      i += 2;
      continue;
    }
    Tok k;
    switch (c) {
      case '{': k = Tok::LBrace; break;
      case '}': k = Tok::RBrace; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case ',': k = Tok::Comma; break;
      case '=': k = Tok::Eq; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      default:
        throw syntax_error(std::string("unexpected character '") + s[i] + "'", {line, col});
    }
    out.push_back({k, std::string(1, s[i]), col});
    ++i;
  }
  out.push_back({Tok::End, "", static_cast<int>(s.size()) + 1});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const CausalGraph& g, int line) : toks_(lex(text, line)), g_(g), line_(line) {}

  EffectQuery effect() {
    EffectQuery q;
    bool first = true;
    while (true) {
      int sign = 1;
      if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
        sign = next().kind == Tok::Minus ? -1 : 1;
      } else if (!first) {
        if (peek().kind == Tok::End) break;
        fail("expected '+' or '-' between terms, got " + describe(peek()));
      }
      q.terms.push_back(term(sign));
      first = false;
      if (peek().kind == Tok::End) break;
    }
    return q;
  }

  ConstraintStatement constraint() {
    ConstraintStatement c;
    c.line = line_;
    if (peek().kind != Tok::Ident) fail("constraint must start with a variable, got " + describe(peek()));
    c.lhs = counterfactual(/*outcome=*/false);
    switch (peek().kind) {
      case Tok::Eq: c.relation = Relation::Equal; break;
      case Tok::Le: c.relation = Relation::LessEqual; break;
      case Tok::Ge: c.relation = Relation::GreaterEqual; break;
      case Tok::Lt: c.relation = Relation::Less; break;
      case Tok::Gt: c.relation = Relation::Greater; break;
      default: fail("expected a relation (=, <=, >=, <, >), got " + describe(peek()));
    }
    next();
    if (peek().kind == Tok::Int) {
      const auto& var = g_.variable(c.lhs.variable);
      c.rhs = value_in_range(var, next());
    } else if (peek().kind == Tok::Ident) {
      c.rhs = counterfactual(false);
    } else {
      fail("expected a variable or a value, got " + describe(peek()));
    }
    expect(Tok::End, "end of statement");
    return c;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, peek().column); }
  [[noreturn]] void fail_at(const std::string& msg, int column) const { throw syntax_error(msg, {line_, column}); }
  [[noreturn]] void fail_code(const char* code, const std::string& msg, int column) const {
    auto e = syntax_error(msg, {line_, column});
    throw Error(ErrorKind::Syntax, code, e.what(), e.where());
  }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail("expected " + what + ", got " + describe(peek()));
    return next();
  }

  int integer(const Token& t) {
    if (t.text.size() > 9) fail_at("integer too large", t.column);
    return std::stoi(t.text);
  }

  EffectTerm term(int sign) {
    EffectTerm t;
    Rational coef(1);
    if (peek().kind == Tok::Int) {
      const Token& num = next();
      BigInt n(num.text, 10);
      BigInt d(1);
      if (peek().kind == Tok::Slash) {
        next();
        const Token& den = expect(Tok::Int, "denominator");
        d = BigInt(den.text, 10);
        if (d == 0) fail_at("zero denominator", den.column);
      }
      coef = Rational(n, d);
      coef.canonicalize();
      if (coef == 0) fail_at("coefficient must be nonzero", num.column);
      if (peek().kind == Tok::Star) next();
    }
    t.coefficient = coef * sign;
    const Token& p = peek();
    if (p.kind != Tok::Ident || p.text != "p") fail("expected 'p{', got " + describe(p));
    next();
    expect(Tok::LBrace, "'{'");
    while (true) {
      OutcomeEvent ev;
      ev.target = counterfactual(/*outcome=*/true);
      expect(Tok::Eq, "'=' followed by the outcome value");
      ev.value = value_in_range(g_.variable(ev.target.variable), next());
      t.events.push_back(std::move(ev));
      if (peek().kind == Tok::Comma) {
        next();
        continue;
      }
      break;
    }
    expect(Tok::RBrace, "'}' or ','");
    return t;
  }

  int value_in_range(const VariableSpec& var, const Token& tok) {
    if (tok.kind != Tok::Int) fail_at("expected an integer value, got " + describe(tok), tok.column);
    int v = integer(tok);
    if (v >= var.cardinality)
      fail_code("VALUE_OUT_OF_RANGE", "value " + tok.text + " out of range for '" + var.name + "' (values 0.." +
                  std::to_string(var.cardinality - 1) + ")",
              tok.column);
    return v;
  }

  const VariableSpec& known_variable(const Token& tok) {
    if (tok.kind != Tok::Ident) fail_at("expected a variable name, got " + describe(tok), tok.column);
    auto idx = g_.find(tok.text);
    if (!idx) fail_code("UNKNOWN_VARIABLE", "unknown variable '" + tok.text + "'", tok.column);
    return g_.variable(*idx);
  }

  CounterfactualVariable counterfactual(bool outcome) {
    const Token& name = next();
    const auto& var = known_variable(name);
    if (outcome && var.latent) fail_code("LATENT_OUTCOME", "outcome '" + var.name + "' is latent", name.column);
    CounterfactualVariable cf{var.name, {}};
    if (peek().kind == Tok::LParen) {
      next();
      cf.interventions = assignments();
      expect(Tok::RParen, "')'");
    }
    return cf;
  }

  std::vector<Intervention> assignments() {
    std::vector<Intervention> out;
    std::set<std::string> targets;
    while (true) {
      const Token& name = next();
      const auto& var = known_variable(name);
      if (var.latent) fail_code("LATENT_INTERVENTION", "cannot intervene on latent variable '" + var.name + "'", name.column);
      if (!targets.insert(var.name).second)
        fail_at("variable '" + var.name + "' is intervened on twice", name.column);
      Intervention iv{var.name, std::nullopt, {}};
      if (peek().kind == Tok::Eq) {
        next();
        iv.value = value_in_range(var, next());
      } else if (peek().kind == Tok::LParen) {
        next();
        iv.nested = assignments();
        expect(Tok::RParen, "')'");
      } else {
        fail("expected '=' or '(' after '" + var.name + "', got " + describe(peek()));
      }
      out.push_back(std::move(iv));
      if (peek().kind != Tok::Comma) break;
      next();
    }
    return out;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const CausalGraph& g_;
  int line_;
};

void format_interventions(std::ostream& out, const std::vector<Intervention>& ivs) {
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    if (i) out << ", ";
    const auto& iv = ivs[i];
    out << iv.variable;
    if (iv.is_constant()) {
      out << " = " << *iv.value;
    } else {
      out << '(';
      format_interventions(out, iv.nested);
      out << ')';
    }
  }
}

}  // namespace

EffectQuery parse_effect(std::string_view text, const CausalGraph& g) {
  Parser p(text, g, 1);
  return p.effect();
}

std::vector<ConstraintStatement> parse_constraints(std::string_view text, const CausalGraph& g) {
  std::vector<ConstraintStatement> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
      continue;
    Parser p(line, g, line_no);
    out.push_back(p.constraint());
  }
  return out;
}

std::string format_counterfactual(const CounterfactualVariable& v) {
  std::ostringstream out;
  out << v.variable;
  if (!v.interventions.empty()) {
    out << '(';
    format_interventions(out, v.interventions);
    out << ')';
  }
  return out.str();
}

std::string relation_symbol(Relation r) {
  switch (r) {
    case Relation::Equal: return "=";
    case Relation::LessEqual: return "<=";
    case Relation::GreaterEqual: return ">=";
    case Relation::Less: return "<";
    case Relation::Greater: return ">";
  }
  return "?";
}

std::string format_constraint(const ConstraintStatement& c) {
  std::string rhs = std::holds_alternative<int>(c.rhs) ? std::to_string(std::get<int>(c.rhs))
                                                       : format_counterfactual(std::get<CounterfactualVariable>(c.rhs));
  return format_counterfactual(c.lhs) + " " + relation_symbol(c.relation) + " " + rhs;
}

std::string format_effect(const EffectQuery& q) {
  std::ostringstream out;
  for (std::size_t i = 0; i < q.terms.size(); ++i) {
    const auto& t = q.terms[i];
    bool negative = t.coefficient < 0;
    Rational mag = abs(t.coefficient);
    if (i == 0)
      out << (negative ? "-" : "");
    else
      out << (negative ? " - " : " + ");
    if (mag != 1) out << to_string(mag) << ' ';
    out << "p{";
    for (std::size_t e = 0; e < t.events.size(); ++e) {
      if (e) out << ", ";
      out << format_counterfactual(t.events[e].target) << " = " << t.events[e].value;
    }
    out << '}';
  }
  return out.str();
}

namespace {

std::size_t nesting_depth(const std::vector<Intervention>& ivs) {
  std::size_t d = 0;
  for (const auto& iv : ivs)
    if (!iv.is_constant()) d = std::max(d, 1 + nesting_depth(iv.nested));
  return d;
}

void check_ancestry(const CausalGraph& g, std::size_t target, const std::vector<Intervention>& ivs,
                    ValidationReport& report, const std::string& where) {
  for (const auto& iv : ivs) {
    auto v = g.index_of(iv.variable);
    if (!g.has_directed_path(v, target))
      report.add("INTERVENTION_NOT_ANCESTOR",
                 "'" + iv.variable + "' has no directed path to '" + g.variable(target).name + "' in " + where,
                 iv.variable);
    if (!iv.is_constant()) check_ancestry(g, v, iv.nested, report, where);
  }
}

}  // namespace

ValidationReport validate_effect(const EffectQuery& q, const CausalGraph& g) {
  ValidationReport report;
  if (q.terms.empty()) report.add("EMPTY_QUERY", "query has no terms");
  const auto max_depth = g.longest_path_length();
  for (const auto& t : q.terms) {
    if (t.coefficient == 0) report.add("ZERO_COEFFICIENT", "term coefficient is zero");
    for (const auto& ev : t.events) {
      auto label = format_counterfactual(ev.target) + " = " + std::to_string(ev.value);
      auto idx = g.find(ev.target.variable);
      if (!idx) {
        report.add("UNKNOWN_VARIABLE", "unknown variable '" + ev.target.variable + "'", ev.target.variable);
        continue;
      }
      const auto& var = g.variable(*idx);
      if (var.side == Side::Left)
        report.add("OUTCOME_ON_LEFT", "outcome '" + var.name + "' is on the left side", label);
      if (var.latent) report.add("LATENT_OUTCOME", "outcome '" + var.name + "' is latent", label);
      if (ev.value < 0 || ev.value >= var.cardinality)
        report.add("VALUE_OUT_OF_RANGE", "value out of range in " + label, label);
      check_ancestry(g, *idx, ev.target.interventions, report, label);
      if (nesting_depth(ev.target.interventions) > max_depth)
        report.add("NESTING_TOO_DEEP", "nested interventions in " + label + " exceed the longest directed path",
                   label);
    }
  }
  if (!report.ok()) return report;

  // Every term's truth value must be fixed by the right-side response
  // functions alone, i.e. constant across left-side configurations.
  ResponseFunctionTable table(g);
  auto configs = left_configurations(table);
  if (configs.size() <= 1) return report;
  for (const auto& t : q.terms) {
    std::set<std::size_t> deps;
    for (const auto& ev : t.events)
      for (auto d : counterfactual_dependencies(table.graph(), ev.target)) deps.insert(d);
    std::vector<std::size_t> dep_slots;
    for (auto d : deps)
      if (g.variable(d).side == Side::Right) dep_slots.push_back(*table.slot_of(d));

    ResponseVector r{std::vector<std::uint64_t>(table.size(), 0)};
    std::vector<std::uint64_t> counter(dep_slots.size(), 0);
    bool varies = false;
    while (!varies) {
      for (std::size_t k = 0; k < dep_slots.size(); ++k) r.index[dep_slots[k]] = counter[k];
      std::optional<bool> first;
      for (const auto& cfg : configs) {
        bool holds = std::all_of(t.events.begin(), t.events.end(), [&](const OutcomeEvent& ev) {
          return eval_counterfactual(table, r, ev.target, &cfg) == ev.value;
        });
        if (!first) first = holds;
        else if (*first != holds) varies = true;
      }
      std::size_t k = 0;
      for (; k < dep_slots.size(); ++k) {
        if (++counter[k] < table.entry_for_slot(dep_slots[k]).count) break;
        counter[k] = 0;
      }
      if (k == dep_slots.size()) break;
    }
    if (varies) {
      EffectQuery single{{t}};
      report.add("LEFT_DEPENDENT_QUERY",
                 "term '" + format_effect(single) + "' depends on the left-side variables' distribution",
                 format_effect(single));
    }
  }
  return report;
}

std::optional<std::string> default_effect_text(const CausalGraph& g) {
  auto x = g.exposure();
  auto y = g.outcome();
  if (!x || !y) return std::nullopt;
  const auto& xn = g.variable(*x).name;
  const auto& yn = g.variable(*y).name;
  return "p{" + yn + "(" + xn + " = 1) = 1} - p{" + yn + "(" + xn + " = 0) = 1}";
}

}  // namespace causalbounds
