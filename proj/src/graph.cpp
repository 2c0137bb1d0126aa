#include "causalbounds/graph.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>

namespace causalbounds {

CausalGraph::CausalGraph(std::vector<VariableSpec> variables, std::vector<EdgeSpec> edges, bool augmented)
    : variables_(std::move(variables)), edges_(std::move(edges)), augmented_(augmented) {}

std::optional<std::size_t> CausalGraph::find(std::string_view name) const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].name == name) return i;
  return std::nullopt;
}

std::size_t CausalGraph::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(ErrorKind::Validation, "UNKNOWN_VARIABLE", "unknown variable '" + std::string(name) + "'");
}

std::vector<std::size_t> CausalGraph::parents(std::size_t i) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges_)
    if (e.to == variables_[i].name)
      if (auto p = find(e.from)) out.push_back(*p);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> CausalGraph::observed_parents(std::size_t i) const {
  auto all = parents(i);
  std::erase_if(all, [&](std::size_t p) { return variables_[p].latent; });
  return all;
}

std::vector<std::size_t> CausalGraph::children(std::size_t i) const {
  std::vector<std::size_t> out;
  for (const auto& e : edges_)
    if (e.from == variables_[i].name)
      if (auto c = find(e.to)) out.push_back(*c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> CausalGraph::observed(Side side) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (!variables_[i].latent && variables_[i].side == side) out.push_back(i);
  return out;
}

std::vector<std::size_t> CausalGraph::observed() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (!variables_[i].latent) out.push_back(i);
  return out;
}

bool CausalGraph::is_monotone_edge(std::size_t from, std::size_t to) const {
  for (const auto& e : edges_)
    if (e.monotone && e.from == variables_[from].name && e.to == variables_[to].name) return true;
  return false;
}

bool CausalGraph::has_directed_path(std::size_t from, std::size_t to) const {
  std::vector<char> seen(variables_.size(), 0);
  std::vector<std::size_t> stack = children(from);
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (seen[v]) continue;
    seen[v] = 1;
    for (auto c : children(v)) stack.push_back(c);
  }
  return false;
}

std::optional<std::vector<std::size_t>> CausalGraph::topological_order() const {
  const std::size_t n = variables_.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> kids(n);
  for (const auto& e : edges_) {
    auto f = find(e.from), t = find(e.to);
    if (!f || !t) continue;
    kids[*f].push_back(*t);
    ++indegree[*t];
  }
  std::vector<std::size_t> order;
  // Smallest canonical index first keeps the order deterministic.
  std::vector<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i)
    if (indegree[i] == 0) ready.push_back(i);
  while (!ready.empty()) {
    auto it = std::min_element(ready.begin(), ready.end());
    auto v = *it;
    ready.erase(it);
    order.push_back(v);
    for (auto c : kids[v])
      if (--indegree[c] == 0) ready.push_back(c);
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

std::size_t CausalGraph::longest_path_length() const {
  auto order = topological_order();
  if (!order) return 0;
  std::vector<std::size_t> depth(variables_.size(), 0);
  std::size_t best = 0;
  for (auto v : *order)
    for (auto c : children(v)) {
      depth[c] = std::max(depth[c], depth[v] + 1);
      best = std::max(best, depth[c]);
    }
  return best;
}

std::optional<std::size_t> CausalGraph::exposure() const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].exposure) return i;
  return std::nullopt;
}

std::optional<std::size_t> CausalGraph::outcome() const {
  for (std::size_t i = 0; i < variables_.size(); ++i)
    if (variables_[i].outcome) return i;
  return std::nullopt;
}

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin() + 1, s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

struct Token {
  enum Kind { Ident, Number, Arrow, Equals, End } kind;
  std::string text;
  int column;
};

std::vector<Token> lex_line(std::string_view line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    int col = static_cast<int>(i) + 1;
    if (c == '#') break;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      out.push_back({Token::Ident, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      out.push_back({Token::Number, std::string(line.substr(i, j - i)), col});
      i = j;
    } else if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({Token::Arrow, "->", col});
      i += 2;
    } else if (c == '=') {
      out.push_back({Token::Equals, "=", col});
      ++i;
    } else {
      throw syntax_error(std::string("unexpected character '") + c + "'", {line_no, col});
    }
  }
  out.push_back({Token::End, "", static_cast<int>(line.size()) + 1});
  return out;
}

}  // namespace

CausalGraph parse_graph_spec(std::string_view text) {
  std::vector<VariableSpec> vars;
  std::vector<EdgeSpec> edges;
  std::map<std::string, int> declared_line;
  struct PendingEdge {
    EdgeSpec edge;
    SourceLocation from_at, to_at;
  };
  std::vector<PendingEdge> pending;

  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto toks = lex_line(line, line_no);
    if (toks.front().kind == Token::End) continue;
    const Token& head = toks.front();
    if (head.kind != Token::Ident) throw syntax_error("expected 'node' or 'edge'", {line_no, head.column});

    if (head.text == "node") {
      if (toks[1].kind != Token::Ident) throw syntax_error("expected variable name", {line_no, toks[1].column});
      VariableSpec v;
      v.name = toks[1].text;
      if (declared_line.count(v.name))
        throw Error(ErrorKind::Syntax, "DUPLICATE_VARIABLE",
                    "line " + std::to_string(line_no) + ": variable '" + v.name + "' already declared on line " +
                        std::to_string(declared_line[v.name]),
                    {line_no, toks[1].column});
      std::size_t k = 2;
      while (toks[k].kind != Token::End) {
        const Token& attr = toks[k];
        if (attr.kind != Token::Ident) throw syntax_error("expected attribute", {line_no, attr.column});
        if (attr.text == "side" || attr.text == "card") {
          if (toks[k + 1].kind != Token::Equals)
            throw syntax_error("expected '=' after '" + attr.text + "'", {line_no, toks[k + 1].column});
          const Token& val = toks[k + 2];
          if (attr.text == "side") {
            if (val.kind != Token::Ident || (val.text != "left" && val.text != "right"))
              throw syntax_error("side must be 'left' or 'right'", {line_no, val.column});
            v.side = val.text == "left" ? Side::Left : Side::Right;
          } else {
            if (val.kind != Token::Number) throw syntax_error("card must be an integer", {line_no, val.column});
            if (val.text.size() > 6) throw syntax_error("card too large", {line_no, val.column});
            v.cardinality = std::stoi(val.text);
          }
          k += 3;
        } else if (attr.text == "latent") {
          v.latent = true, ++k;
        } else if (attr.text == "exposure") {
          v.exposure = true, ++k;
        } else if (attr.text == "outcome") {
          v.outcome = true, ++k;
        } else {
          throw syntax_error("unknown attribute '" + attr.text + "'", {line_no, attr.column});
        }
      }
      declared_line[v.name] = line_no;
      vars.push_back(std::move(v));
    } else if (head.text == "edge") {
      if (toks[1].kind != Token::Ident) throw syntax_error("expected edge source", {line_no, toks[1].column});
      if (toks[2].kind != Token::Arrow) throw syntax_error("expected '->'", {line_no, toks[2].column});
      if (toks[3].kind != Token::Ident) throw syntax_error("expected edge target", {line_no, toks[3].column});
      PendingEdge pe{{toks[1].text, toks[3].text, false}, {line_no, toks[1].column}, {line_no, toks[3].column}};
      std::size_t k = 4;
      if (toks[k].kind == Token::Ident && toks[k].text == "monotone") {
        pe.edge.monotone = true;
        ++k;
      }
      if (toks[k].kind != Token::End) throw syntax_error("unexpected '" + toks[k].text + "'", {line_no, toks[k].column});
      pending.push_back(std::move(pe));
    } else {
      throw syntax_error("expected 'node' or 'edge', got '" + head.text + "'", {line_no, head.column});
    }
  }

  for (const auto& pe : pending) {
    for (const auto& [name, at] : {std::pair{pe.edge.from, pe.from_at}, std::pair{pe.edge.to, pe.to_at}})
      if (!declared_line.count(name))
        throw Error(ErrorKind::Syntax, "UNDECLARED_VARIABLE",
                    "line " + std::to_string(at.line) + ": edge references undeclared variable '" + name + "'", at);
    for (const auto& e : edges)
      if (e.from == pe.edge.from && e.to == pe.edge.to)
        throw Error(ErrorKind::Syntax, "DUPLICATE_EDGE",
                    "line " + std::to_string(pe.from_at.line) + ": duplicate edge " + e.from + " -> " + e.to,
                    pe.from_at);
    edges.push_back(pe.edge);
  }

  CausalGraph g(std::move(vars), std::move(edges));
  if (!g.topological_order()) {
    for (const auto& pe : pending)
      if (pe.edge.from == pe.edge.to || g.has_directed_path(g.index_of(pe.edge.to), g.index_of(pe.edge.from)))
        throw Error(ErrorKind::Syntax, "CYCLE",
                    "line " + std::to_string(pe.from_at.line) + ": edge " + pe.edge.from + " -> " + pe.edge.to +
                        " closes a cycle",
                    pe.from_at);
  }
  return g;
}

std::string format_graph_spec(const CausalGraph& g) {
  std::ostringstream out;
  for (const auto& v : g.variables()) {
    out << "node " << v.name << " side=" << (v.side == Side::Left ? "left" : "right");
    if (!v.latent) out << " card=" << v.cardinality;
    if (v.latent) out << " latent";
    if (v.exposure) out << " exposure";
    if (v.outcome) out << " outcome";
    out << '\n';
  }
  for (const auto& e : g.edges()) {
    out << "edge " << e.from << " -> " << e.to;
    if (e.monotone) out << " monotone";
    out << '\n';
  }
  return out.str();
}

ValidationReport validate_graph(const CausalGraph& g) {
  ValidationReport report;
  const auto& vars = g.variables();

  std::map<std::string, int> seen;
  for (const auto& v : vars) {
    if (!is_identifier(v.name)) report.add("INVALID_NAME", "'" + v.name + "' is not a valid identifier", v.name);
    if (seen[v.name]++ == 1) report.add("DUPLICATE_VARIABLE", "variable '" + v.name + "' declared twice", v.name);
    if (!v.latent && v.cardinality < 2)
      report.add("INVALID_CARDINALITY",
                 "observed variable '" + v.name + "' needs at least 2 levels, has " + std::to_string(v.cardinality),
                 v.name);
    if (v.outcome && v.side == Side::Left)
      report.add("OUTCOME_ON_LEFT", "outcome '" + v.name + "' must be on the right side", v.name);
    if (v.latent && (v.exposure || v.outcome))
      report.add("LATENT_FLAGGED", "latent '" + v.name + "' cannot be exposure or outcome", v.name);
  }
  if (std::count_if(vars.begin(), vars.end(), [](const auto& v) { return v.exposure; }) > 1)
    report.add("MULTIPLE_EXPOSURE", "at most one variable may be flagged exposure");
  if (std::count_if(vars.begin(), vars.end(), [](const auto& v) { return v.outcome; }) > 1)
    report.add("MULTIPLE_OUTCOME", "at most one variable may be flagged outcome");

  bool endpoints_ok = true;
  for (const auto& e : g.edges()) {
    std::string label = e.from + " -> " + e.to;
    auto f = g.find(e.from), t = g.find(e.to);
    if (!f || !t) {
      report.add("UNDECLARED_VARIABLE", "edge " + label + " references an undeclared variable", label);
      endpoints_ok = false;
      continue;
    }
    if (*f == *t) report.add("CYCLE", "self-loop on '" + e.from + "'", label);
    if (vars[*f].side == Side::Right && vars[*t].side == Side::Left)
      report.add("RIGHT_TO_LEFT", "edge " + label + " must go from L to R", label);
    if (e.monotone && (vars[*f].latent || vars[*t].latent))
      report.add("MONOTONE_LATENT", "monotone edge " + label + " must join observed variables", label);
    if (vars[*t].latent)
      report.add("LATENT_WITH_PARENTS", "latent '" + e.to + "' must be exogenous (no parents)", label);
  }
  if (endpoints_ok && !g.topological_order()) {
    bool reported = report.has("CYCLE");
    if (!reported) report.add("CYCLE", "the edge set contains a directed cycle");
  }

  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (!vars[i].latent) continue;
    bool left = false, right = false;
    for (auto c : g.children(i)) (vars[c].side == Side::Left ? left : right) = true;
    if (left && right)
      report.add("CROSS_SIDE_CONFOUNDER", "latent '" + vars[i].name + "' is a common parent across sides",
                 vars[i].name);
    else if ((left && vars[i].side == Side::Right) || (right && vars[i].side == Side::Left))
      report.add("CROSS_SIDE_CONFOUNDER",
                 "latent '" + vars[i].name + "' is declared on one side but confounds the other", vars[i].name);
  }
  return report;
}

namespace {

std::string fresh_name(const CausalGraph& g, std::string base) {
  while (g.find(base)) base += "_";
  return base;
}

}  // namespace

CausalGraph augment_confounders(const CausalGraph& g) {
  if (g.augmented())
    throw Error(ErrorKind::Validation, "ALREADY_AUGMENTED", "graph already carries its latent confounders");
  auto report = validate_graph(g);
  if (!report.ok()) throw validation_error(report);

  auto vars = g.variables();
  auto edges = g.edges();
  auto left = g.observed(Side::Left);
  auto right = g.observed(Side::Right);
  if (!left.empty()) {
    std::string ul = fresh_name(g, "Ul");
    vars.push_back({ul, Side::Left, 2, true, false, false});
    for (auto i : left) edges.push_back({ul, g.variable(i).name, false});
  }
  if (!right.empty()) {
    std::string ur = fresh_name(g, "Ur");
    vars.push_back({ur, Side::Right, 2, true, false, false});
    for (auto i : right) edges.push_back({ur, g.variable(i).name, false});
  }
  return CausalGraph(std::move(vars), std::move(edges), true);
}

CausalGraph ensure_augmented(const CausalGraph& g) {
  if (g.augmented()) return g;
  bool has_latent = std::any_of(g.variables().begin(), g.variables().end(), [](const auto& v) { return v.latent; });
  if (!has_latent) return augment_confounders(g);
  auto report = validate_graph(g);
  if (!report.ok()) throw validation_error(report);
  return CausalGraph(g.variables(), g.edges(), true);
}

}  // namespace causalbounds
