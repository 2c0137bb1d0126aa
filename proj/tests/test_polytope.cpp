#include <doctest.h>

#include <algorithm>
#include <random>

#include "causalbounds/polytope.hpp"
#include "oracles.hpp"

using namespace causalbounds;

namespace {

RationalMatrix sorted(RationalMatrix m) {
  std::sort(m.begin(), m.end());
  return m;
}

RationalMatrix normalized_rays(const RationalMatrix& rays) {
  RationalMatrix out;
  for (const auto& r : rays) out.push_back(oracle::normalize_direction(r));
  return sorted(out);
}

HPolyhedron random_hpolytope(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim(1, 4), entry(-3, 3), den(1, 3), rhs(-2, 6);
  std::size_t d = dim(rng);
  std::uniform_int_distribution<std::size_t> rows(d + 1, 12);
  std::size_t m = rows(rng);
  RationalMatrix a(m, RationalVector(d));
  RationalVector b(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (auto& x : a[i]) {
      x = Rational(entry(rng), den(rng));
      x.canonicalize();
    }
    b[i] = Rational(rhs(rng), den(rng));
    b[i].canonicalize();
  }
  return HPolyhedron(a, b, d);
}

}  // namespace

TEST_SUITE("polytope") {
  TEST_CASE("unit square") {
    HPolyhedron h({{-1, 0}, {1, 0}, {0, -1}, {0, 1}}, {0, 1, 0, 1}, 2);
    auto v = dd_vertex_enumeration(h);
    CHECK(v.vertices == RationalMatrix{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK(v.rays.empty());
    CHECK(v.lineality.empty());
  }

  TEST_CASE("simplex") {
    HPolyhedron h({{-1, 0}, {0, -1}, {1, 1}}, {0, 0, 1}, 2);
    auto v = dd_vertex_enumeration(h);
    CHECK(sorted(v.vertices) == RationalMatrix{{0, 0}, {0, 1}, {1, 0}});
  }

  TEST_CASE("empty, unbounded and lower-dimensional regions") {
    HPolyhedron empty({{1}, {-1}}, {0, -1}, 1);  // y <= 0 and y >= 1
    CHECK(dd_vertex_enumeration(empty).empty());
    CHECK(dd_vertex_enumeration(empty).rays.empty());

    HPolyhedron quadrant({{-1, 0}, {0, -1}}, {0, 0}, 2);
    auto q = dd_vertex_enumeration(quadrant);
    CHECK(q.vertices == RationalMatrix{{0, 0}});
    CHECK(normalized_rays(q.rays) == RationalMatrix{{0, 1}, {1, 0}});

    HPolyhedron strip({{0, 1}, {0, -1}}, {1, 0}, 2);  // 0 <= y2 <= 1, y1 free
    auto s = dd_vertex_enumeration(strip);
    CHECK(s.lineality.size() == 1);
    CHECK(s.vertices.size() == 2);

    HPolyhedron segment({{1, 1}, {-1, 0}, {0, -1}}, {1, 0, 0}, 2);
    segment.equality = {true, false, false};
    CHECK(sorted(dd_vertex_enumeration(segment).vertices) == RationalMatrix{{0, 1}, {1, 0}});
  }

  TEST_CASE("rational vertices") {
    HPolyhedron h({{2, 1}, {1, 3}, {-1, 0}, {0, -1}}, {1, 1, 0, 0}, 2);
    auto v = dd_vertex_enumeration(h);
    CHECK(sorted(v.vertices) ==
          RationalMatrix{{0, 0}, {0, Rational(1, 3)}, {Rational(2, 5), Rational(1, 5)}, {Rational(1, 2), 0}});
  }

  TEST_CASE("oracle: 200 random polyhedra against tight-subset enumeration") {
    std::mt19937_64 rng(2024);
    int tested = 0, with_rays = 0, infeasible = 0;
    while (tested < 200) {
      auto h = random_hpolytope(rng);
      if (rank(h.a) != h.dimension) continue;  // vertices are only defined for pointed regions
      ++tested;
      auto v = dd_vertex_enumeration(h);
      auto expected = oracle::brute_force_vertices(h.a, h.b, h.dimension);
      CHECK(sorted(v.vertices) == expected);
      CHECK(v.lineality.empty());
      for (const auto& x : v.vertices) CHECK(h.contains(x));
      if (expected.empty()) {
        ++infeasible;
        continue;
      }
      auto rays = oracle::brute_force_rays(h.a, h.dimension);
      CHECK(normalized_rays(v.rays) == rays);
      with_rays += !rays.empty();
      CHECK(dd_vertex_enumeration(h) == v);  // deterministic
    }
    CHECK(tested == 200);
    MESSAGE("unbounded: " << with_rays << ", infeasible: " << infeasible);
  }

  TEST_CASE("debug dump round trips") {
    HPolyhedron h({{Rational(1, 2), -1}, {0, 3}}, {Rational(-7, 3), 2}, 2);
    h.equality = {false, true};
    auto text = format_hrep(h);
    auto back = parse_hrep(text);
    CHECK(back.a == h.a);
    CHECK(back.b == h.b);
    CHECK(back.is_equality(1));
    CHECK_FALSE(back.is_equality(0));

    HPolyhedron quadrant({{-1, 0}, {0, -1}, {1, 1}}, {0, 0, 1}, 2);
    auto v = dd_vertex_enumeration(quadrant);
    CHECK(parse_vrep(format_vrep(v, 2)) == v);
    CHECK(format_hrep(h).find("1/2") != std::string::npos);
  }

  TEST_CASE("cancellation") {
    auto token = CancelToken::manual();
    token.cancel();
    HPolyhedron h({{-1, 0}, {1, 0}, {0, -1}, {0, 1}}, {0, 1, 0, 1}, 2);
    CHECK_THROWS_AS(dd_vertex_enumeration(h, token), Error);
  }
}
