#include <doctest.h>

#include "toricdeg/errors.hpp"
#include "toricdeg/rational.hpp"

using namespace toricdeg;

TEST_CASE("parse_rational accepts integers, fractions and finite decimals") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-2/4") == Rational(-1, 2));
  CHECK(parse_rational(" 7/1 ") == 7);
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(parse_rational(".5") == Rational(1, 2));
  CHECK(parse_rational("+4") == 4);
}

TEST_CASE("parse_rational rejects everything else") {
  for (const char* bad : {"", "abc", "1/0", "1/-2", "1e3", "1.2.3", "nan", "-", "3/"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_rational(bad), NonRationalInput);
  }
}

TEST_CASE("to_string is canonical") {
  CHECK(to_string(Rational(6) / 4) == "3/2");
  CHECK(to_string(Rational(-8) / 4) == "-2");
  CHECK(to_string(Rational(0)) == "0");
}

TEST_CASE("determinant and rank") {
  CHECK(determinant({{Rational(2), Rational(1)}, {Rational(1), Rational(3)}}) == 5);
  CHECK(determinant({{Rational(0), Rational(1)}, {Rational(1), Rational(0)}}) == -1);
  CHECK(determinant({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}) == 0);
  CHECK(rank({{Rational(1), Rational(2)}, {Rational(2), Rational(4)}}) == 1);
  CHECK(rank({{Rational(1), Rational(0), Rational(0)}, {Rational(0), Rational(1, 3), Rational(0)}}) == 2);
}

TEST_CASE("primitive_integer scales to the smallest positive integer multiple") {
  const RationalVector v{Rational(2, 3), Rational(-4, 9)};
  CHECK(primitive_integer(v) == IntVector{3, -2});
  const RationalVector w{Rational(0), Rational(-5)};
  CHECK(primitive_integer(w) == IntVector{0, -1});
}

TEST_CASE("floor and ceiling helpers") {
  CHECK(floor_div(-7, 2) == -4);
  CHECK(ceil_div(-7, 2) == -3);
  CHECK(floor_div(7, -2) == -4);
  CHECK(ceil_div(7, 2) == 4);
  CHECK(floor_to_int(Rational(-1, 3)) == -1);
  CHECK(ceil_to_int(Rational(-1, 3)) == 0);
  CHECK(floor_to_int(Rational(5)) == 5);
  CHECK(is_integer(Rational(4) / 2));
  CHECK_FALSE(is_integer(Rational(1, 2)));
}
