#include <doctest.h>

#include <cmath>

#include "mfe/exact.hpp"

using namespace mfe;

TEST_CASE("turns reduce into [0, 1)") {
  CHECK(Turn(5, 4) == Turn(1, 4));
  CHECK(Turn(-1, 4) == Turn(3, 4));
  CHECK(Turn(2, 4).den() == 2);
  CHECK(Turn(1, 3) + Turn(2, 3) == Turn(0, 1));
  CHECK(-Turn(1, 6) == Turn(5, 6));
  CHECK(Turn(1, 3) < Turn(1, 2));
  CHECK(Turn(3, 4).str() == "3/4");
}

TEST_CASE("quarter turns convert exactly") {
  CHECK(Turn(1, 4).to_complex() == Complex(0, 1));
  CHECK(Turn(1, 2).to_complex() == Complex(-1, 0));
  CHECK(Turn(3, 4).to_complex() == Complex(0, -1));
  CHECK(Turn(0, 1).to_complex() == Complex(1, 0));
  CHECK(std::abs(Turn(1, 3).to_complex() - std::polar(1.0, 2 * M_PI / 3)) < 1e-15);
}

TEST_CASE("exact values multiply exactly") {
  const ExactValue i = ExactValue::root(Turn(1, 4));
  CHECK(i * i * i * i == ExactValue());
  CHECK((i * ExactValue::zero()).is_zero());
  CHECK(i.inverse() == ExactValue::root(Turn(3, 4)));
  CHECK(ExactValue() < i);
  CHECK(i < ExactValue::zero());
  CHECK(ExactValue::zero().str() == "0");
}

TEST_CASE("gaussian rationals") {
  GaussianRational i;
  REQUIRE(GaussianRational::from_quarter_turn(ExactValue::root(Turn(1, 4)), i));
  CHECK(i * i == GaussianRational(-1));
  const GaussianRational a(1, 2, 3, 4);  // 1/2 + 3/4 i
  CHECK((a / a) == GaussianRational(1));
  CHECK((a - a).is_zero());
  CHECK(std::abs((a * i).to_complex() - Complex(-0.75, 0.5)) == 0.0);
  GaussianRational cube;
  CHECK_FALSE(GaussianRational::from_quarter_turn(ExactValue::root(Turn(1, 3)), cube));
  const GaussianRational big(std::int64_t(1) << 62);
  CHECK_THROWS_AS(big * big, std::overflow_error);
}
