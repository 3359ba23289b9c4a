#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "stablab/error.hpp"
#include "stablab/exact.hpp"

using namespace stablab;

TEST_CASE("rationals reduce and keep the sign in the numerator") {
  Rational r(6, -4);
  CHECK(r.num() == -3);
  CHECK(r.den() == 2);
  CHECK(Rational(0, 7) == Rational(0));
  CHECK((Rational(1, 3) + Rational(1, 6)) == Rational(1, 2));
  CHECK((Rational(1, 3) - Rational(1, 2)) == Rational(-1, 6));
  CHECK((Rational(2, 3) * Rational(9, 4)) == Rational(3, 2));
  CHECK((Rational(2, 3) / Rational(-4, 9)) == Rational(-3, 2));
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(compare(Rational(-1, 2), Rational(-1, 3)) < 0);
  CHECK(Rational(7, 2).str() == "7/2");
  CHECK(Rational(-4).str() == "-4");
}

TEST_CASE("rational errors") {
  CHECK_THROWS_AS(Rational(1, 0), Error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), Error);
  const auto big = std::numeric_limits<std::int64_t>::max();
  try {
    (void)(Rational(big) * Rational(big));
    FAIL("expected overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
  // products that cancel back into range survive the 128-bit intermediate
  CHECK((Rational(big, 3) * Rational(3, big)) == Rational(1));
}

TEST_CASE("exact complex arithmetic stays exact") {
  ComplexValue i(Rational(0), Rational(1));
  ComplexValue one_i(Rational(1), Rational(1));
  ComplexValue z = i + one_i;
  CHECK(z.exact());
  CHECK(z == ComplexValue(Rational(1), Rational(2)));
  CHECK(i * i == ComplexValue(Rational(-1), Rational(0)));
  CHECK(-i == i * -1);
  CHECK((one_i * 3).re_exact() == Rational(3));
}

TEST_CASE("mixing in a floating operand gives a floating result") {
  ComplexValue i(Rational(0), Rational(1));
  ComplexValue f(std::complex<double>(0.5, 0.25));
  ComplexValue s = i + f;
  CHECK_FALSE(s.exact());
  CHECK(s.real() == doctest::Approx(0.5));
  CHECK(s.imag() == doctest::Approx(1.25));
  CHECK_THROWS_AS(s.re_exact(), Error);
}

TEST_CASE("semiclosed upper half-plane and phases") {
  CHECK(ComplexValue(Rational(-1), Rational(0)).in_semiclosed_upper_half_plane());
  CHECK_FALSE(ComplexValue(Rational(1), Rational(0)).in_semiclosed_upper_half_plane());
  CHECK_FALSE(ComplexValue(Rational(0), Rational(-1)).in_semiclosed_upper_half_plane());
  CHECK_FALSE(ComplexValue().in_semiclosed_upper_half_plane());
  CHECK(ComplexValue(Rational(-1), Rational(0)).phase_in_window() == 1.0);
  CHECK(ComplexValue(Rational(0), Rational(1)).phase_in_window() == doctest::Approx(0.5));
  CHECK(ComplexValue(Rational(1), Rational(2)).phase_in_window() ==
        doctest::Approx(std::atan2(2.0, 1.0) / std::numbers::pi));
}

TEST_CASE("cross sign orders arguments exactly") {
  ComplexValue a(Rational(1), Rational(1)), b(Rational(0), Rational(1)), c(Rational(2), Rational(2));
  CHECK(cross_sign(a, b) == 1);
  CHECK(cross_sign(b, a) == -1);
  CHECK(cross_sign(a, c) == 0);
  // arguments differing far below double resolution
  ComplexValue p(Rational(1000000000, 1), Rational(1000000001, 1));
  ComplexValue q(Rational(999999999, 1), Rational(1000000000, 1));
  CHECK(cross_sign(q, p) == -1);
}
