#include <doctest.h>

#include "causalbounds/rational.hpp"

using namespace causalbounds;

TEST_SUITE("rational") {
  TEST_CASE("canonical text form") {
    CHECK(to_string(Rational(6, 4)) == "3/2");
    CHECK(to_string(Rational(-4, 2)) == "-2");
    CHECK(to_string(parse_rational("-10/4")) == "-5/2");
    CHECK(parse_rational("010") == 10);  // decimal, never octal
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/-2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("0x10"), std::invalid_argument);
  }

  TEST_CASE("rank and greedy independent rows") {
    RationalMatrix m{{1, 1, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}, {1, 1, 0, 0}, {0, 0, 1, 1}};
    CHECK(rank(m) == 3);
    CHECK(independent_rows(m) == std::vector<std::size_t>{0, 1, 3});
    CHECK(rank(RationalMatrix{}) == 0);
    CHECK(independent_rows(RationalMatrix{{0, 0}, {2, 1}}) == std::vector<std::size_t>{1});
  }
}
