#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "oracles/bessel.hpp"

TEST_CASE("bessel series matches tabulated values") {
  // Abramowitz & Stegun table 9.1
  CHECK(oracle::bessel_j(0, 1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-15));
  CHECK(oracle::bessel_j(1, 1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-15));
  CHECK(oracle::bessel_j(2, 1.0) == doctest::Approx(0.1149034849319005).epsilon(1e-15));
  CHECK(oracle::bessel_j(0, 2.404825557695773) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(oracle::bessel_j(5, 3.0) == doctest::Approx(0.04302843487704758).epsilon(1e-14));
}

TEST_CASE("bessel negative order and sum rule") {
  for (double x : {0.1, 0.7, 2.5, 6.0}) {
    CHECK(oracle::bessel_j(-3, x) == doctest::Approx(-oracle::bessel_j(3, x)));
    CHECK(oracle::bessel_j(-4, x) == doctest::Approx(oracle::bessel_j(4, x)));
    double s = 0;
    for (int n = -40; n <= 40; ++n) s += oracle::bessel_j(n, x) * oracle::bessel_j(n, x);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
  }
}
