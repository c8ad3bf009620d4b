#include <doctest.h>

#include "stoknap/rational.hpp"
#include "stoknap/rng.hpp"

using namespace stoknap;

TEST_CASE("parse_rational handles fractions, decimals and exponents") {
  CHECK(parse_rational("3/7") == Rational(3, 7));
  CHECK(parse_rational("-5") == Rational(-5));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("0.1") == Rational(1, 10));  // parsed exactly, not via double
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(parse_rational("2.5e2") == Rational(250));
  CHECK(parse_rational("-3.5/0.5") == Rational(-7));
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
}

TEST_CASE("rational_from_double is exact for dyadics and round-trips") {
  CHECK(rational_from_double(0.5) == Rational(1, 2));
  CHECK(rational_from_double(-0.75) == Rational(-3, 4));
  CHECK(rational_from_double(3.0) == Rational(3));
  for (double x : {0.1, 1e-9, 123.456, -2.718281828459045}) {
    CHECK(to_double(rational_from_double(x)) == x);
  }
}

TEST_CASE("rational_to_string formats integers and fractions") {
  CHECK(rational_to_string(Rational(3, 7)) == "3/7");
  CHECK(rational_to_string(Rational(4, 2)) == "2");
  CHECK(rational_to_string(Rational(-1, 3)) == "-1/3");
  CHECK(parse_rational(rational_to_string(Rational(22, 7))) == Rational(22, 7));
}

TEST_CASE("floor and ceil behave on negatives") {
  CHECK(floor_rational(Rational(7, 2)) == 3);
  CHECK(floor_rational(Rational(-7, 2)) == -4);
  CHECK(ceil_rational(Rational(7, 2)) == 4);
  CHECK(ceil_rational(Rational(-7, 2)) == -3);
  CHECK(floor_rational(Rational(6)) == 6);
}

TEST_CASE("round_to_multiple picks the nearest grid point, ties up") {
  Rational g(1, 400);
  CHECK(round_to_multiple(Rational(3, 10), g) == Rational(120, 400));
  CHECK(round_to_multiple(Rational(1, 800), g) == g);          // tie rounds up
  CHECK(round_to_multiple(Rational(1, 801), g) == Rational(0));
  CHECK(floor_quotient(Rational(7, 10), Rational(1, 5)) == 3);
}

TEST_CASE("derived rng streams are deterministic and tag-separated") {
  RngStream a(42), b(42);
  CHECK(a.next_u64() == b.next_u64());
  CHECK(a.uniform01() == b.uniform01());
  RngStream c = a.derive("x"), d = b.derive("x"), e = b.derive("y");
  CHECK(c.next_u64() == d.next_u64());
  CHECK(c.seed() != e.seed());
  double u = RngStream(7).uniform01();
  CHECK(u >= 0);
  CHECK(u < 1);
}
