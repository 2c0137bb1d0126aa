#include <doctest.h>

#include <random>

#include "causalbounds/response.hpp"

using namespace causalbounds;

namespace {

ResponseFunctionTable table_for(const char* spec) { return ResponseFunctionTable(ensure_augmented(parse_graph_spec(spec))); }

const char* kIv = "node Z side=left\nnode X\nnode Y\nedge Z -> X\nedge X -> Y\n";
const char* kMediation = "node X side=left\nnode Y\nnode M\nedge X -> M\nedge X -> Y\nedge M -> Y\n";

// Independent digit decoding: function `index` of a variable with `card`
// levels evaluated at parent-assignment position k.
int digit(std::uint64_t index, int card, std::uint64_t k) {
  for (std::uint64_t i = 0; i < k; ++i) index /= card;
  return static_cast<int>(index % card);
}

ResponseVector vec(const ResponseFunctionTable& t, std::initializer_list<std::pair<const char*, std::uint64_t>> xs) {
  ResponseVector r{std::vector<std::uint64_t>(t.size(), 0)};
  for (auto [name, idx] : xs) r.index[*t.slot_of(t.graph().index_of(name))] = idx;
  return r;
}

}  // namespace

TEST_SUITE("response") {
  TEST_CASE("function counts") {
    auto t = table_for(kIv);
    CHECK(t.entry(t.graph().index_of("Z")).count == 2);
    CHECK(t.entry(t.graph().index_of("X")).count == 4);
    CHECK(t.entry(t.graph().index_of("Y")).count == 4);
    CHECK(t.right_joint_count() == 16);
    auto m = table_for("node Z side=left card=3\nnode X\nnode Y\nedge Z -> X\nedge X -> Y");
    CHECK(m.entry(m.graph().index_of("Z")).count == 3);
    CHECK(m.entry(m.graph().index_of("X")).count == 8);
    auto med = table_for(kMediation);
    CHECK(med.entry(med.graph().index_of("Y")).count == 16);
    CHECK(med.right_joint_count() == 64);
  }

  TEST_CASE("digit convention: index 2 is the complier") {
    auto t = table_for(kIv);
    const auto& x = t.entry(t.graph().index_of("X"));
    int z0 = 0, z1 = 1;
    CHECK(x.evaluate(2, std::span<const int>(&z0, 1)) == 0);
    CHECK(x.evaluate(2, std::span<const int>(&z1, 1)) == 1);
    CHECK(x.evaluate(1, std::span<const int>(&z0, 1)) == 1);  // defier
    CHECK(x.evaluate(1, std::span<const int>(&z1, 1)) == 0);
  }

  TEST_CASE("recursive evaluation") {
    auto t = table_for(kIv);
    auto r = vec(t, {{"Z", 1}, {"X", 2}, {"Y", 2}});
    CHECK(eval_response(t, r, t.graph().index_of("Z")) == 1);
    CHECK(eval_response(t, r, t.graph().index_of("X")) == 1);
    CHECK(eval_response(t, r, t.graph().index_of("Y")) == 1);
    CHECK(eval_response(t, r, t.graph().index_of("Y")) == eval_response(t, r, t.graph().index_of("Y")));
    auto p = vec(t, {{"Z", 1}});
    CHECK(eval_response(t, p, t.graph().index_of("Z")) == 1);
  }

  TEST_CASE("oracle: interventional evaluation on the mediation graph") {
    auto t = table_for(kMediation);
    const auto& g = t.graph();
    auto parse = [&](const char* s) { return parse_effect(s, g).terms.at(0).events.at(0).target; };
    auto cde = parse("p{Y(M = 0, X = 1) = 1}");
    auto nde = parse("p{Y(M(X = 0), X = 1) = 1}");
    auto total = parse("p{Y(X = 1) = 1}");
    auto mediator = parse("p{M(X = 0) = 1}");
    auto configs = left_configurations(t);
    for (std::uint64_t ry = 0; ry < 16; ++ry)
      for (std::uint64_t rm = 0; rm < 4; ++rm)
        for (const auto& cfg : configs) {
          auto r = vec(t, {{"Y", ry}, {"M", rm}});
          // Structural equations written out by hand: M = f_M(X), Y = f_Y(X, M)
          // with Y's parent assignment position 2 * x + m.
          auto f_m = [&](int x) { return digit(rm, 2, x); };
          auto f_y = [&](int x, int m) { return digit(ry, 2, 2 * x + m); };
          CHECK(eval_counterfactual(t, r, cde, &cfg) == f_y(1, 0));
          CHECK(eval_counterfactual(t, r, nde, &cfg) == f_y(1, f_m(0)));
          CHECK(eval_counterfactual(t, r, total, &cfg) == f_y(1, f_m(1)));
          CHECK(eval_counterfactual(t, r, mediator, &cfg) == f_m(0));
          int x = *cfg[*t.slot_of(g.index_of("X"))];
          CHECK(eval_response(t, r, g.index_of("Y"), &cfg) == f_y(x, f_m(x)));
        }
  }

  TEST_CASE("oracle: monotone edges keep exactly the non-decreasing functions") {
    for (int zc = 2; zc <= 3; ++zc)
      for (int xc = 2; xc <= 3; ++xc) {
        std::string spec = "node Z side=left card=" + std::to_string(zc) + "\nnode X card=" + std::to_string(xc) +
                           "\nnode Y\nedge Z -> X monotone\nedge X -> Y";
        auto t = table_for(spec.c_str());
        auto adm = admissible_response_indices(t, {});
        std::size_t xs = *t.slot_of(t.graph().index_of("X"));
        std::vector<std::uint64_t> expected;
        std::uint64_t n = 1;
        for (int i = 0; i < zc; ++i) n *= xc;
        for (std::uint64_t f = 0; f < n; ++f) {
          bool ok = true;
          for (int z = 0; z + 1 < zc; ++z) ok = ok && digit(f, xc, z) <= digit(f, xc, z + 1);
          if (ok) expected.push_back(f);
        }
        CHECK(adm.per_slot[xs] == expected);
      }
  }

  TEST_CASE("statement constraints filter single variables") {
    auto t = table_for(kIv);
    auto cs = parse_constraints("X(Z = 1) >= X(Z = 0)", t.graph());
    auto adm = admissible_response_indices(t, cs);
    CHECK(adm.per_slot[*t.slot_of(t.graph().index_of("X"))] == std::vector<std::uint64_t>{0, 2, 3});
    CHECK(adm.per_slot[*t.slot_of(t.graph().index_of("Y"))].size() == 4);
    CHECK(adm.joint.empty());

    auto none = parse_constraints("X(Z = 1) > X(Z = 0)\nX(Z = 1) < X(Z = 0)", t.graph());
    try {
      admissible_response_indices(t, none);
      FAIL("expected infeasible assumptions");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Infeasible);
    }
    auto joint = parse_constraints("Y(X = 1) >= X(Z = 1)", t.graph());
    CHECK(admissible_response_indices(t, joint).joint.size() == 1);
  }

  TEST_CASE("left configurations are lexicographic") {
    auto t = table_for("node A side=left\nnode B side=left card=3\nnode Y\nedge A -> Y\nedge B -> Y");
    auto cfgs = left_configurations(t);
    REQUIRE(cfgs.size() == 6);
    auto a = *t.slot_of(t.graph().index_of("A")), b = *t.slot_of(t.graph().index_of("B"));
    CHECK(*cfgs[0][a] == 0);
    CHECK(*cfgs[0][b] == 0);
    CHECK(*cfgs[1][b] == 1);
    CHECK(*cfgs[3][a] == 1);
    CHECK(*cfgs[3][b] == 0);
  }
}
