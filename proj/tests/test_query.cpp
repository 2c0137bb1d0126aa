#include <doctest.h>

#include <functional>
#include <random>

#include "causalbounds/query.hpp"

using namespace causalbounds;

namespace {

const char* kIv = "node Z side=left\nnode X exposure\nnode Y outcome\nedge Z -> X\nedge X -> Y\n";
const char* kMediation = "node X side=left\nnode Y outcome\nnode M\nedge X -> M\nedge X -> Y\nedge M -> Y\n";

std::string error_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "none";
}

}  // namespace

TEST_SUITE("query") {
  TEST_CASE("risk difference") {
    auto g = parse_graph_spec(kIv);
    auto q = parse_effect("p{Y(X = 1) = 1} - p{Y(X = 0) = 1}", g);
    REQUIRE(q.terms.size() == 2);
    CHECK(q.terms[0].coefficient == 1);
    CHECK(q.terms[1].coefficient == -1);
    const auto& ev = q.terms[0].events.at(0);
    CHECK(ev.target.variable == "Y");
    CHECK(ev.value == 1);
    REQUIRE(ev.target.interventions.size() == 1);
    CHECK(ev.target.interventions[0].variable == "X");
    CHECK(*ev.target.interventions[0].value == 1);
  }

  TEST_CASE("nested natural direct effect setting") {
    auto g = parse_graph_spec(kMediation);
    auto q = parse_effect("p{Y(M(X = 0), X = 1) = 1} - p{Y(M(X = 0), X = 0) = 1}", g);
    REQUIRE(q.terms.size() == 2);
    for (const auto& t : q.terms) {
      const auto& iv = t.events.at(0).target.interventions;
      REQUIRE(iv.size() == 2);
      CHECK(iv[0].variable == "M");
      CHECK_FALSE(iv[0].is_constant());
      REQUIRE(iv[0].nested.size() == 1);
      CHECK(iv[0].nested[0].variable == "X");
      CHECK(*iv[0].nested[0].value == 0);
    }
    CHECK(validate_effect(q, g).ok());
  }

  TEST_CASE("rejections carry codes and columns") {
    auto g = parse_graph_spec(kIv);
    CHECK(error_code([&] { parse_effect("p{Y(X = 2) = 1}", g); }) == "VALUE_OUT_OF_RANGE");
    CHECK(error_code([&] { parse_effect("p{W(X = 1) = 1}", g); }) == "UNKNOWN_VARIABLE");
    CHECK(error_code([&] { parse_effect("p{Y(X = 1, X = 0) = 1}", g); }) != "none");
    try {
      parse_effect("p{Y(X = 1) = 1} + ", g);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Syntax);
      CHECK(e.where().column > 0);
    }
  }

  TEST_CASE("latent variables cannot be intervened on") {
    auto g = parse_graph_spec("node X\nnode Y\nnode U latent\nedge U -> X\nedge U -> Y\nedge X -> Y");
    CHECK(error_code([&] { parse_effect("p{Y(U = 1) = 1}", g); }) == "LATENT_INTERVENTION");
  }

  TEST_CASE("constraints") {
    auto g = parse_graph_spec(kIv);
    auto cs = parse_constraints("X(Z = 1) >= X(Z = 0)", g);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].relation == Relation::GreaterEqual);
    CHECK(parse_constraints("", g).empty());
    CHECK(parse_constraints("\n  \n", g).empty());
    CHECK(parse_constraints("X(Z = 1) \xE2\x89\xA5 X(Z = 0)", g).at(0).relation == Relation::GreaterEqual);
    try {
      parse_constraints("X(Z=1) >= W", g);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.where().line == 1);
      CHECK(std::string(e.what()).find("W") != std::string::npos);
    }
    try {
      parse_constraints("X(Z = 1) >= X(Z = 0)\nX(Z = 1) >=", g);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.where().line == 2);
    }
  }

  TEST_CASE("canonical formatting") {
    auto g = parse_graph_spec(kIv);
    CHECK(format_effect(parse_effect("p{Y(X=1)=1}-p{ Y( X = 0 ) = 1 }", g)) == "p{Y(X = 1) = 1} - p{Y(X = 0) = 1}");
    CHECK(format_effect(parse_effect("+p{Y = 1}", g)) == "p{Y = 1}");
    CHECK(format_effect(parse_effect("2 p{Y = 1}", g)) == "2 p{Y = 1}");
    CHECK(format_effect(parse_effect("2*p{Y = 1} - 1/2 p{X = 0, Y = 1}", g)) == "2 p{Y = 1} - 1/2 p{X = 0, Y = 1}");
  }

  TEST_CASE("validation") {
    auto g = parse_graph_spec(kIv);
    CHECK(validate_effect(parse_effect("p{Y(X = 1) = 1} - p{Y(X = 0) = 1}", g), g).ok());
    CHECK(validate_effect(parse_effect("p{Z = 1}", g), g).has("OUTCOME_ON_LEFT"));
    CHECK(validate_effect(parse_effect("p{Y = 1}", g), g).has("LEFT_DEPENDENT_QUERY"));
    CHECK(validate_effect(parse_effect("p{X(Y = 1) = 1}", g), g).has("INTERVENTION_NOT_ANCESTOR"));
    auto r = parse_graph_spec("node X\nnode Y\nedge X -> Y");
    CHECK(validate_effect(parse_effect("p{Y = 1}", r), r).ok());
    CHECK(*default_effect_text(g) == "p{Y(X = 1) = 1} - p{Y(X = 0) = 1}");
    CHECK_FALSE(default_effect_text(r).has_value());
  }

  TEST_CASE("property: format(parse(s)) is a fixed point on random queries") {
    auto g = parse_graph_spec(kMediation);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> bit(0, 1), nterms(1, 4), coef(1, 5);
    auto random_event = [&] {
      std::string ev = "Y";
      switch (rng() % 4) {
        case 0: break;
        case 1: ev += "(X = " + std::to_string(bit(rng)) + ")"; break;
        case 2: ev += "(M = " + std::to_string(bit(rng)) + ", X = " + std::to_string(bit(rng)) + ")"; break;
        default: ev += "(M(X = " + std::to_string(bit(rng)) + "), X = " + std::to_string(bit(rng)) + ")"; break;
      }
      ev += " = " + std::to_string(bit(rng));
      if (bit(rng)) ev += ", M(X = " + std::to_string(bit(rng)) + ") = " + std::to_string(bit(rng));
      return ev;
    };
    for (int trial = 0; trial < 300; ++trial) {
      std::string s;
      int n = nterms(rng);
      for (int i = 0; i < n; ++i) {
        s += i == 0 ? (bit(rng) ? "-" : "") : (bit(rng) ? " - " : " + ");
        int c = coef(rng);
        if (c > 1) s += std::to_string(c) + (bit(rng) ? "/" + std::to_string(coef(rng)) : "") + " ";
        s += "p{" + random_event() + "}";
      }
      auto q = parse_effect(s, g);
      auto f = format_effect(q);
      CHECK(parse_effect(f, g) == q);
      CHECK(format_effect(parse_effect(f, g)) == f);
    }
  }
}
