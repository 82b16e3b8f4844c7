#include <doctest.h>

#include <cmath>

#include "apdiff/errors.hpp"
#include "apdiff/groups.hpp"
#include "apdiff/rational.hpp"

using namespace apdiff;

TEST_CASE("coordinates reduce per factor") {
  const InternalSpace h({Factor::euclidean(1), Factor::torus(2), Factor::cyclic(5)});
  CHECK(h.coordinate_count() == 4);
  CHECK(h.euclidean_dim() == 1);
  CHECK(h.torus_dim() == 2);
  CHECK(h.cyclic_count() == 1);
  CHECK_FALSE(h.is_compact());
  const InternalPoint y = h.point({-2.5, 1.25, -0.25, 7});
  CHECK(y[0] == -2.5);
  CHECK(y[1] == doctest::Approx(0.25));
  CHECK(y[2] == doctest::Approx(0.75));
  CHECK(y[3] == 2);
  CHECK(y.cyclic_part() == std::vector<long long>{2});
}

TEST_CASE("group law") {
  const InternalSpace h({Factor::torus(1), Factor::cyclic(3)});
  const InternalPoint a = h.point({0.75, 2});
  const InternalPoint b = h.point({0.5, 2});
  const InternalPoint s = add(a, b);
  CHECK(s[0] == doctest::Approx(0.25));
  CHECK(s[1] == 1);
  const InternalPoint z = add(a, negate(a));
  CHECK(z[0] == doctest::Approx(0.0));
  CHECK(z[1] == 0);
}

TEST_CASE("characters") {
  const InternalSpace h({Factor::euclidean(1), Factor::torus(1), Factor::cyclic(4)});
  const InternalCharacter chi = h.character({0.5, 3, 1});
  const InternalPoint y = h.point({1.0, 0.25, 3});
  // 0.5*1 + 3*0.25 + 1*3/4
  const Complex expect = std::polar(1.0, kTwoPi * (0.5 + 0.75 + 0.75));
  const Complex got = evaluate_character(chi, y);
  CHECK(std::abs(got - expect) < 1e-12);
}

TEST_CASE("mismatched spaces are structural errors") {
  const InternalSpace a({Factor::torus(1)});
  const InternalSpace b({Factor::cyclic(2)});
  CHECK_THROWS_AS(add(a.identity(), b.identity()), StructuralError);
}

TEST_CASE("quadrature: torus and cyclic masses are one") {
  const InternalSpace h({Factor::torus(1), Factor::cyclic(7)});
  const Complex one = quadrature(h, [](const InternalPoint&) { return Complex(1.0); });
  CHECK(std::abs(one - 1.0) < 1e-13);
  const InternalCharacter chi = h.character({2, 0});
  const Complex zero = quadrature(h, [&](const InternalPoint& y) { return evaluate_character(chi, y); });
  CHECK(std::abs(zero) < 1e-14);
  const InternalCharacter chi2 = h.character({0, 3});
  const Complex zero2 = quadrature(h, [&](const InternalPoint& y) { return evaluate_character(chi2, y); });
  CHECK(std::abs(zero2) < 1e-14);
}

TEST_CASE("quadrature: Gauss-Legendre integrates polynomials") {
  const InternalSpace h({Factor::euclidean(1)});
  QuadratureOptions o;
  o.euclidean_bounds = {{-1.0, 2.0}};
  const Complex v = quadrature(h, [](const InternalPoint& y) { return Complex(y[0] * y[0]); }, o);
  CHECK(v.real() == doctest::Approx(3.0).epsilon(1e-14));
  const GaussRule& g = gauss_legendre(64);
  double w = 0;
  for (double x : g.weights) w += x;
  CHECK(w == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("quadrature needs Euclidean bounds") {
  const InternalSpace h({Factor::euclidean(1)});
  CHECK_THROWS(quadrature(h, [](const InternalPoint&) { return Complex(1.0); }));
}

TEST_CASE("rationals") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-2") == Rational(-2));
  CHECK_THROWS_AS(parse_rational("x/2"), std::invalid_argument);
  CHECK(rationalize(0.375).value() == Rational(3, 8));
  CHECK_FALSE(rationalize(std::sqrt(2.0), 1000).has_value());
}

TEST_CASE("hermite normal form and kernels") {
  const IntMatrix h = hermite_normal_form({{2, 1}, {0, 3}});
  CHECK(abs_determinant(h) == 6);
  CHECK(h[0][1] == 0);
  for (int i = 0; i < 2; ++i) CHECK(h[i][i] > 0);
  CHECK(h[1][0] >= 0);
  CHECK(h[1][0] < h[1][1]);
  // k/2 integral -> 2Z
  const IntMatrix k = integer_kernel_mod_one({{Rational(1, 2)}}, 1);
  CHECK(abs_determinant(k) == 2);
  const IntMatrix k2 = integer_kernel_mod_one({{Rational(1, 2), Rational(1, 3)}}, 2);
  CHECK(abs_determinant(k2) == 6);
}
