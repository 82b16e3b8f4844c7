#include <doctest.h>

#include "apdiff/errors.hpp"
#include "apdiff/functions.hpp"

using namespace apdiff;

TEST_CASE("tent and bump") {
  const InternalSpace h({Factor::euclidean(1)});
  const WeightFunction t = WeightFunction::tent(h, {0.5}, {2.0});
  CHECK(t(h.point({0.5})).real() == doctest::Approx(1.0));
  CHECK(t(h.point({1.5})).real() == doctest::Approx(0.5));
  CHECK(t(h.point({3.0})).real() == 0.0);
  CHECK(t.support().euclidean_bounds()[0].lo == doctest::Approx(-1.5));
  const WeightFunction b = WeightFunction::bump(h, {0.0}, {1.0});
  CHECK(b(h.point({0.5})).real() == doctest::Approx(0.5));
  CHECK(b(h.point({1.5})).real() == 0.0);
}

TEST_CASE("constants need a compact space") {
  CHECK_THROWS(WeightFunction::constant(InternalSpace({Factor::euclidean(1)}), 1.0));
  CHECK_NOTHROW(WeightFunction::constant(InternalSpace({Factor::torus(1)}), 1.0));
}

TEST_CASE("torus trig weight and deformation") {
  const InternalSpace h({Factor::torus(1)});
  const ApFunction f = ApFunction::scalar(1, {{{1.0}, Complex(0, 1), std::nullopt}});
  const WeightFunction w = WeightFunction::torus_trig(h, f);
  CHECK(std::abs(w(h.point({0.25})) - Complex(0, 1) * Complex(0, 1)) < 1e-14);
  const ApFunction half = ApFunction::scalar(1, {{{0.5}, 1.0, std::nullopt}});
  CHECK_THROWS(WeightFunction::torus_trig(h, half));
  const DeformationMap p = DeformationMap::torus_trig(h, ApFunction::real_vector(1, {sine_tone({1.0}, 0.1)}));
  CHECK(p(h.point({0.25}))[0] == doctest::Approx(0.1));
  CHECK(p.sup_norm() == doctest::Approx(0.1));
}

TEST_CASE("cyclic tables") {
  const InternalSpace h({Factor::cyclic(3)});
  const WeightFunction w = WeightFunction::cyclic_table(h, {{{1}, 2.0}});
  CHECK(w(h.point({1})).real() == 2.0);
  CHECK(w(h.point({2})).real() == 0.0);
  CHECK_FALSE(w.support().contains(h.point({0})));
}

TEST_CASE("lifting to a larger space") {
  const InternalSpace h({Factor::euclidean(1)});
  const InternalSpace big = h.product(InternalSpace({Factor::torus(1)}));
  const WeightFunction t = WeightFunction::tent(h, {0.0}, {1.0});
  const WeightFunction lt = t.lifted_to(big);
  CHECK(lt(big.point({0.5, 0.3})).real() == doctest::Approx(0.5));
  CHECK(lt.support().contains(big.point({0.5, 0.9})));
  CHECK(project_leading(h, big.point({0.5, 0.3}))[0] == 0.5);
}

TEST_CASE("linear deformation") {
  const InternalSpace h({Factor::euclidean(1)});
  Eigen::MatrixXd a(1, 1);
  a << 0.5;
  const DeformationMap p = DeformationMap::linear(h, a, {{-2.0, 1.0}});
  CHECK(p(h.point({2.0}))[0] == doctest::Approx(1.0));
  CHECK(p.sup_norm() == doctest::Approx(1.0));
}
