#include "causalbounds/polytope.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <sstream>
#include <stdexcept>

namespace causalbounds {

HPolyhedron::HPolyhedron(RationalMatrix a_, RationalVector b_, std::size_t dim)
    : a(std::move(a_)), b(std::move(b_)), dimension(dim) {
  check();
}

void HPolyhedron::check() const {
  if (a.size() != b.size()) throw std::invalid_argument("H-representation: A and b have different row counts");
  if (!equality.empty() && equality.size() != a.size())
    throw std::invalid_argument("H-representation: equality flags do not match rows");
  for (const auto& row : a)
    if (row.size() != dimension) throw std::invalid_argument("H-representation: ragged row");
}

bool HPolyhedron::contains(const RationalVector& y) const {
  for (std::size_t i = 0; i < a.size(); ++i) {
    Rational s = 0;
    for (std::size_t j = 0; j < dimension; ++j) s += a[i][j] * y[j];
    if (is_equality(i) ? s != b[i] : s > b[i]) return false;
  }
  return true;
}

namespace {

using IntVec = std::vector<BigInt>;

class Bits {
 public:
  explicit Bits(std::size_t n = 0) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) {
    if (i / 64 >= words_.size()) words_.resize(i / 64 + 1, 0);
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  bool test(std::size_t i) const { return i / 64 < words_.size() && (words_[i / 64] >> (i % 64)) & 1; }
  Bits operator&(const Bits& o) const {
    Bits r;
    r.words_.resize(std::min(words_.size(), o.words_.size()));
    for (std::size_t w = 0; w < r.words_.size(); ++w) r.words_[w] = words_[w] & o.words_[w];
    return r;
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      auto word = words_[w];
      while (word) {
        auto bit = static_cast<std::size_t>(std::countr_zero(word));
        f(w * 64 + bit);
        word &= word - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  IntVec x;
  Bits zero;  // processed constraints tight at x
};

BigInt dot(const IntVec& a, const IntVec& b) {
  BigInt s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

void make_primitive(IntVec& v) {
  BigInt g = 0;
  for (const auto& e : v) {
    if (e == 0) continue;
    g = gcd(g, e);
    if (g == 1) return;
  }
  if (g > 1)
    for (auto& e : v) e /= g;
}

// s0 * u - s * w, made primitive. Requires s0 > 0.
IntVec combine(const BigInt& s0, const IntVec& u, const BigInt& s, const IntVec& w) {
  IntVec out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = s0 * u[i] - s * w[i];
  make_primitive(out);
  return out;
}

// Rank of the selected rows, stopping once `target` is reached.
std::size_t rank_of_rows(const std::vector<IntVec>& rows, const Bits& which, std::size_t target) {
  std::vector<IntVec> basis;
  std::vector<std::size_t> pivots;
  bool done = false;
  which.for_each([&](std::size_t i) {
    if (done) return;
    IntVec r = rows[i];
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const auto pc = pivots[b];
      if (r[pc] == 0) continue;
      BigInt f = r[pc], p = basis[b][pc];
      for (std::size_t c = 0; c < r.size(); ++c) r[c] = p * r[c] - f * basis[b][c];
      make_primitive(r);
    }
    std::size_t pc = 0;
    while (pc < r.size() && r[pc] == 0) ++pc;
    if (pc == r.size()) return;
    basis.push_back(std::move(r));
    pivots.push_back(pc);
    if (basis.size() >= target) done = true;
  });
  return basis.size();
}

IntVec integer_row(const Rational& rhs, const RationalVector& a, bool negate) {
  // row for  rhs * t - a . y >= 0  scaled by the lcm of denominators
  BigInt l = rhs.get_den();
  for (const auto& e : a) l = lcm(l, e.get_den());
  IntVec out(a.size() + 1);
  Rational scaled = rhs * l;
  out[0] = scaled.get_num();
  for (std::size_t j = 0; j < a.size(); ++j) {
    Rational s = -a[j] * l;
    out[j + 1] = s.get_num();
  }
  if (negate)
    for (auto& e : out) e = -e;
  make_primitive(out);
  return out;
}

bool lex_less(const RationalVector& a, const RationalVector& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

RationalMatrix canonical_basis(const std::vector<IntVec>& vecs, std::size_t offset) {
  // reduced row echelon form of the y-parts
  RationalMatrix m;
  for (const auto& v : vecs) {
    RationalVector r;
    for (std::size_t j = offset; j < v.size(); ++j) r.emplace_back(v[j]);
    m.push_back(std::move(r));
  }
  std::size_t row = 0;
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
    std::size_t p = row;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[row], m[p]);
    Rational inv = 1 / m[row][c];
    for (auto& e : m[row]) e *= inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == row || m[i][c] == 0) continue;
      Rational f = m[i][c];
      for (std::size_t k = 0; k < cols; ++k) m[i][k] -= f * m[row][k];
    }
    ++row;
  }
  m.resize(row);
  return m;
}

}  // namespace

VRepresentation dd_vertex_enumeration(const HPolyhedron& h, const CancelToken& cancel, DDStats* stats) {
  h.check();
  const std::size_t d = h.dimension;
  const std::size_t n = d + 1;  // homogenized: x = (t, y)

  std::vector<IntVec> rows;
  {
    IntVec t_row(n, 0);
    t_row[0] = 1;
    rows.push_back(std::move(t_row));
  }
  for (std::size_t i = 0; i < h.rows(); ++i) {
    rows.push_back(integer_row(h.b[i], h.a[i], false));
    if (h.is_equality(i)) rows.push_back(integer_row(h.b[i], h.a[i], true));
  }

  std::vector<IntVec> lineality;
  for (std::size_t i = 0; i < n; ++i) {
    IntVec e(n, 0);
    e[i] = 1;
    lineality.push_back(std::move(e));
  }
  std::vector<Ray> rays;
  Bits processed;

  for (std::size_t k = 0; k < rows.size(); ++k) {
    cancel.throw_if_stopped();
    const IntVec& hk = rows[k];

    std::size_t pick = lineality.size();
    BigInt s0;
    for (std::size_t i = 0; i < lineality.size(); ++i) {
      s0 = dot(hk, lineality[i]);
      if (s0 != 0) {
        pick = i;
        break;
      }
    }

    if (pick < lineality.size()) {
      IntVec l0 = lineality[pick];
      if (s0 < 0) {
        for (auto& e : l0) e = -e;
        s0 = -s0;
      }
      std::vector<IntVec> next_lin;
      for (std::size_t i = 0; i < lineality.size(); ++i) {
        if (i == pick) continue;
        BigInt s = dot(hk, lineality[i]);
        next_lin.push_back(s == 0 ? lineality[i] : combine(s0, lineality[i], s, l0));
      }
      lineality = std::move(next_lin);
      for (auto& r : rays) {
        BigInt s = dot(hk, r.x);
        if (s != 0) r.x = combine(s0, r.x, s, l0);
        r.zero.set(k);
      }
      Ray fresh{l0, processed};
      rays.push_back(std::move(fresh));
      processed.set(k);
      continue;
    }

    std::vector<BigInt> value(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      value[i] = dot(hk, rays[i].x);
      if (value[i] > 0) pos.push_back(i);
      else if (value[i] < 0) neg.push_back(i);
    }

    std::vector<Ray> next;
    if (!neg.empty() && !pos.empty() && n >= lineality.size() + 2) {
      const std::size_t target = n - lineality.size() - 2;
      for (auto p : pos) {
        cancel.throw_if_stopped();
        for (auto q : neg) {
          Bits common = rays[p].zero & rays[q].zero;
          if (common.count() < target) continue;
          if (stats) ++stats->adjacency_tests;
          if (rank_of_rows(rows, common, target) != target) continue;
          Ray r;
          BigInt minus = -value[q];
          r.x.resize(n);
          for (std::size_t c = 0; c < n; ++c) r.x[c] = value[p] * rays[q].x[c] + minus * rays[p].x[c];
          make_primitive(r.x);
          r.zero = common;
          r.zero.set(k);
          next.push_back(std::move(r));
        }
      }
    }
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (value[i] < 0) continue;
      if (value[i] == 0) rays[i].zero.set(k);
      next.push_back(std::move(rays[i]));
    }
    rays = std::move(next);
    processed.set(k);
    if (stats) stats->max_intermediate_rays = std::max(stats->max_intermediate_rays, rays.size());
  }

  VRepresentation out;
  for (const auto& r : rays) {
    if (r.x[0] > 0) {
      RationalVector v(d);
      for (std::size_t j = 0; j < d; ++j) {
        v[j] = Rational(r.x[j + 1], r.x[0]);
        v[j].canonicalize();
      }
      out.vertices.push_back(std::move(v));
    } else {
      RationalVector v(d);
      for (std::size_t j = 0; j < d; ++j) v[j] = Rational(r.x[j + 1]);
      out.rays.push_back(std::move(v));
    }
  }
  if (out.vertices.empty()) return {};
  out.lineality = canonical_basis(lineality, 1);
  std::sort(out.vertices.begin(), out.vertices.end(), lex_less);
  std::sort(out.rays.begin(), out.rays.end(), lex_less);
  return out;
}

std::string format_hrep(const HPolyhedron& h) {
  std::ostringstream out;
  out << "H " << h.rows() << ' ' << h.dimension << '\n';
  for (std::size_t i = 0; i < h.rows(); ++i) {
    if (h.is_equality(i)) out << "= ";
    out << to_string(h.b[i]);
    for (const auto& e : h.a[i]) out << ' ' << to_string(e);
    out << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

}  // namespace

HPolyhedron parse_hrep(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  HPolyhedron h;
  std::size_t rows = 0;
  bool header = false;
  while (std::getline(in, line)) {
    auto w = split_words(line);
    if (w.empty()) continue;
    if (!header) {
      if (w.size() != 3 || w[0] != "H") throw std::invalid_argument("H dump: bad header");
      rows = std::stoul(w[1]);
      h.dimension = std::stoul(w[2]);
      header = true;
      continue;
    }
    bool eq = w[0] == "=";
    std::size_t off = eq ? 1 : 0;
    if (w.size() != off + 1 + h.dimension) throw std::invalid_argument("H dump: row length");
    h.b.push_back(parse_rational(w[off]));
    RationalVector a;
    for (std::size_t j = off + 1; j < w.size(); ++j) a.push_back(parse_rational(w[j]));
    h.a.push_back(std::move(a));
    h.equality.push_back(eq);
  }
  if (!header || h.rows() != rows) throw std::invalid_argument("H dump: row count mismatch");
  h.check();
  return h;
}

std::string format_vrep(const VRepresentation& v, std::size_t dimension) {
  std::ostringstream out;
  out << "V " << v.vertices.size() << ' ' << v.rays.size() << ' ' << v.lineality.size() << ' ' << dimension << '\n';
  auto emit = [&](char tag, const RationalMatrix& m) {
    for (const auto& row : m) {
      out << tag;
      for (const auto& e : row) out << ' ' << to_string(e);
      out << '\n';
    }
  };
  emit('v', v.vertices);
  emit('r', v.rays);
  emit('l', v.lineality);
  return out.str();
}

VRepresentation parse_vrep(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  VRepresentation v;
  bool header = false;
  std::size_t nv = 0, nr = 0, nl = 0, dim = 0;
  while (std::getline(in, line)) {
    auto w = split_words(line);
    if (w.empty()) continue;
    if (!header) {
      if (w.size() != 5 || w[0] != "V") throw std::invalid_argument("V dump: bad header");
      nv = std::stoul(w[1]), nr = std::stoul(w[2]), nl = std::stoul(w[3]), dim = std::stoul(w[4]);
      header = true;
      continue;
    }
    if (w.size() != dim + 1) throw std::invalid_argument("V dump: row length");
    RationalVector row;
    for (std::size_t j = 1; j < w.size(); ++j) row.push_back(parse_rational(w[j]));
    if (w[0] == "v") v.vertices.push_back(std::move(row));
    else if (w[0] == "r") v.rays.push_back(std::move(row));
    else if (w[0] == "l") v.lineality.push_back(std::move(row));
    else throw std::invalid_argument("V dump: unknown tag '" + w[0] + "'");
  }
  if (!header || v.vertices.size() != nv || v.rays.size() != nr || v.lineality.size() != nl)
    throw std::invalid_argument("V dump: count mismatch");
  return v;
}

}  // namespace causalbounds
