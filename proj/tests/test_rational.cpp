#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "adic/rational.hpp"

using namespace adic;

TEST_CASE("rational string round-trip") {
  CHECK(rat_to_string(rat(22, 7)) == "22/7");
  CHECK(rat_to_string(rat(4, 2)) == "2");
  CHECK(rat_from_string("7/9") == rat(7, 9));
  CHECK(rat_from_string("-3/6") == rat(-1, 2));
  CHECK_THROWS_AS(rat_from_string("1/0"), Error);
  CHECK_THROWS_AS(rat_from_string("zebra"), Error);
}

TEST_CASE("rat_pow") {
  CHECK(rat_pow(rat(3, 2), 4) == rat(81, 16));
  CHECK(rat_pow(rat(2), -3) == rat(1, 8));
  CHECK(rat_pow(rat(5), 0) == 1);
  CHECK(rat_pow(rat(0), 5) == 0);
  CHECK_THROWS_AS(rat_pow(rat(0), -1), Error);
}

TEST_CASE("decimal rendering") {
  CHECK(rat_to_decimal(rat(1, 2)) == "0.5");
  CHECK(rat_to_decimal(rat(-1, 2)) == "-0.5");
  CHECK(rat_to_decimal(rat(0)) == "0");
  CHECK(rat_to_decimal(rat(1, 3), 5) == "0.33333");
  CHECK(rat_to_decimal(rat(2, 3), 5) == "0.66667");
  CHECK(rat_to_decimal(rat(1000), 3) == "1000");
  CHECK(rat_to_decimal(rat(1, 100000), 3) == "1e-5");
  CHECK(rat_to_decimal(rat(729, 64), 6) == "11.3906");
  // 17 significant digits round-trip through double parsing
  CHECK(rat_to_decimal(rat(1, 7)) == "0.14285714285714286");
}

TEST_CASE("rationalize via continued fractions") {
  CHECK(rationalize(0.5, 1e-9) == rat(1, 2));
  CHECK(rationalize(3.0, 1e-9) == rat(3));
  CHECK(rationalize(2.0 / 3.0, 1e-12) == rat(2, 3));
  CHECK(rationalize(-0.25, 1e-9) == rat(-1, 4));
  auto pi_ish = rationalize(3.14159265358979, 1e-3);
  REQUIRE(pi_ish.has_value());
  CHECK(abs(*pi_ish - rat(355, 113)) < rat(1, 100));
}
