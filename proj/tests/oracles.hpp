// Independent reference implementations used only by the tests. Nothing here
// calls into the double-description code or the bound expressions.
#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "causalbounds/rational.hpp"

namespace oracle {

using causalbounds::Rational;
using causalbounds::RationalMatrix;
using causalbounds::RationalVector;

// Solves the square system M x = r; nullopt when M is singular.
inline std::optional<RationalVector> solve_square(RationalMatrix m, RationalVector r) {
  const std::size_t n = m.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return std::nullopt;
    std::swap(m[p], m[c]);
    std::swap(r[p], r[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || m[i][c] == 0) continue;
      Rational f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
      r[i] -= f * r[c];
    }
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = r[i] / m[i][i];
  return x;
}

inline void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  while (true) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Vertices of {y : A y <= b} by solving every d-subset of rows as equalities.
inline RationalMatrix brute_force_vertices(const RationalMatrix& a, const RationalVector& b, std::size_t d) {
  RationalMatrix out;
  for_each_subset(a.size(), d, [&](const std::vector<std::size_t>& rows) {
    RationalMatrix m;
    RationalVector r;
    for (auto i : rows) {
      m.push_back(a[i]);
      r.push_back(b[i]);
    }
    auto x = solve_square(m, r);
    if (!x) return;
    for (std::size_t i = 0; i < a.size(); ++i) {
      Rational s = 0;
      for (std::size_t j = 0; j < d; ++j) s += a[i][j] * (*x)[j];
      if (s > b[i]) return;
    }
    out.push_back(*x);
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Scales a direction so that its first nonzero entry has absolute value 1.
inline RationalVector normalize_direction(RationalVector v) {
  for (const auto& x : v)
    if (x != 0) {
      Rational s = abs(x);
      for (auto& y : v) y /= s;
      break;
    }
  return v;
}

// Extreme rays of {d : A d <= 0} for a pointed cone: directions whose tight
// rows have rank dim - 1.
inline RationalMatrix brute_force_rays(const RationalMatrix& a, std::size_t d) {
  RationalMatrix out;
  if (d == 0) return out;
  for_each_subset(a.size(), d - 1, [&](const std::vector<std::size_t>& rows) {
    // Null space of the chosen rows must be one-dimensional; find it by
    // fixing each coordinate to 1 in turn.
    for (std::size_t fix = 0; fix < d; ++fix) {
      RationalMatrix m;
      RationalVector r;
      for (auto i : rows) {
        RationalVector row;
        for (std::size_t j = 0; j < d; ++j)
          if (j != fix) row.push_back(a[i][j]);
        m.push_back(row);
        r.push_back(-a[i][fix]);
      }
      auto x = solve_square(m, r);
      if (!x) continue;
      RationalVector dir;
      for (std::size_t j = 0, k = 0; j < d; ++j) dir.push_back(j == fix ? Rational(1) : (*x)[k++]);
      for (int sign : {1, -1}) {
        RationalVector s = dir;
        for (auto& v : s) v *= sign;
        bool ok = true;
        for (const auto& row : a) {
          Rational t = 0;
          for (std::size_t j = 0; j < d; ++j) t += row[j] * s[j];
          if (t > 0) ok = false;
        }
        if (ok) out.push_back(normalize_direction(s));
      }
      break;
    }
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct LpResult {
  bool feasible = false;
  bool bounded = true;
  Rational value;
  RationalVector x;
};

// min c^T x  s.t.  A x = b, x >= 0.  Two-phase tableau simplex over exact
// rationals with Bland's rule, so it terminates on degenerate problems.
inline LpResult lp_minimize(const RationalMatrix& a, const RationalVector& b, const RationalVector& c) {
  const std::size_t m = a.size(), n = c.size(), total = n + m;
  RationalMatrix t(m, RationalVector(total + 1));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    int s = b[i] < 0 ? -1 : 1;
    for (std::size_t j = 0; j < n; ++j) t[i][j] = s * a[i][j];
    t[i][n + i] = 1;
    t[i][total] = s * b[i];
    basis[i] = n + i;
  }
  auto pivot = [&](std::size_t r, std::size_t col) {
    Rational p = t[r][col];
    for (auto& v : t[r]) v /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || t[i][col] == 0) continue;
      Rational f = t[i][col];
      for (std::size_t j = 0; j <= total; ++j) t[i][j] -= f * t[r][j];
    }
    basis[r] = col;
  };
  // Returns false when unbounded.
  auto run = [&](const RationalVector& cost, std::size_t allowed) {
    while (true) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < allowed && !enter; ++j) {
        Rational d = cost[j];
        for (std::size_t i = 0; i < m; ++i) d -= cost[basis[i]] * t[i][j];
        if (d < 0) enter = j;
      }
      if (!enter) return true;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < m; ++i) {
        if (t[i][*enter] <= 0) continue;
        Rational ratio = t[i][total] / t[i][*enter];
        if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return false;
      pivot(*leave, *enter);
    }
  };
  RationalVector phase1(total, Rational(0));
  for (std::size_t j = n; j < total; ++j) phase1[j] = 1;
  run(phase1, total);
  LpResult res;
  Rational infeas = 0;
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] >= n) infeas += t[i][total];
  if (infeas != 0) return res;
  res.feasible = true;
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) continue;
    for (std::size_t j = 0; j < n; ++j)
      if (t[i][j] != 0) {
        pivot(i, j);
        break;
      }
  }
  RationalVector phase2(total, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = c[j];
  if (!run(phase2, n)) {
    res.bounded = false;
    return res;
  }
  res.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = t[i][total];
  res.value = 0;
  for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
  return res;
}

inline LpResult lp_maximize(const RationalMatrix& a, const RationalVector& b, const RationalVector& c) {
  RationalVector neg(c.size());
  for (std::size_t j = 0; j < c.size(); ++j) neg[j] = -c[j];
  auto r = lp_minimize(a, b, neg);
  r.value = -r.value;
  return r;
}

// Random point of the probability simplex with small rational weights.
inline RationalVector random_rational_simplex(std::size_t n, std::mt19937_64& rng, int max_weight = 20,
                                              double zero_probability = 0.2) {
  std::uniform_int_distribution<int> w(1, max_weight);
  std::bernoulli_distribution zero(zero_probability);
  RationalVector q(n);
  Rational total = 0;
  for (auto& x : q) {
    x = zero(rng) ? 0 : w(rng);
    total += x;
  }
  if (total == 0) {
    q[0] = 1;
    total = 1;
  }
  for (auto& x : q) x /= total;
  return q;
}

}  // namespace oracle
