#include "causalbounds/rational.hpp"

#include <stdexcept>

namespace causalbounds {

std::string to_string(const Rational& value) {
  Rational r = value;
  r.canonicalize();
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  auto is_int = [](std::string_view s) {
    std::size_t i = 0;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{"1"} : text.substr(slash + 1);
  if (!is_int(num) || !is_int(den) || den.front() == '-' || den.front() == '+')
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  std::string n(num);
  if (n.front() == '+') n.erase(0, 1);
  BigInt d(std::string(den), 10);
  if (d == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rational r(BigInt(n, 10), d);
  r.canonicalize();
  return r;
}

double to_double(const Rational& r) { return r.get_d(); }

namespace {

// Row-echelon reduction in place; returns pivot rows in the original order of
// the rows that survived (rows are processed top to bottom, so the greedy
// subset is exactly the rows that were not reduced to zero).
std::vector<std::size_t> echelon_rows(const RationalMatrix& m) {
  std::vector<std::size_t> kept;
  RationalMatrix basis;  // reduced copies of kept rows
  std::vector<std::size_t> pivot_col;
  for (std::size_t i = 0; i < m.size(); ++i) {
    RationalVector row = m[i];
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Rational& f = row[pivot_col[b]];
      if (f == 0) continue;
      Rational factor = f / basis[b][pivot_col[b]];
      for (std::size_t c = 0; c < row.size(); ++c)
        if (basis[b][c] != 0) row[c] -= factor * basis[b][c];
    }
    std::size_t pc = 0;
    while (pc < row.size() && row[pc] == 0) ++pc;
    if (pc == row.size()) continue;
    kept.push_back(i);
    basis.push_back(std::move(row));
    pivot_col.push_back(pc);
  }
  return kept;
}

}  // namespace

std::size_t rank(RationalMatrix m) { return echelon_rows(m).size(); }

std::vector<std::size_t> independent_rows(const RationalMatrix& m) { return echelon_rows(m); }

}  // namespace causalbounds
