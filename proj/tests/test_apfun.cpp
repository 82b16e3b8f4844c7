#include <doctest.h>

#include <cmath>

#include "apdiff/apfun.hpp"
#include "apdiff/errors.hpp"

using namespace apdiff;

TEST_CASE("tones evaluate to cos and sin") {
  const ApFunction c = ApFunction::real_vector(1, {real_tone({0.3}, 2.0, 0.5)});
  const ApFunction s = ApFunction::real_vector(1, {sine_tone({0.3}, 2.0)});
  for (double x : {-3.0, 0.0, 1.7, 12.25}) {
    CHECK(c.vector_value({x})[0] == doctest::Approx(2 * std::cos(kTwoPi * 0.3 * x + 0.5)));
    CHECK(s.vector_value({x})[0] == doctest::Approx(2 * std::sin(kTwoPi * 0.3 * x)));
  }
}

TEST_CASE("real vectors need conjugate symmetric terms") {
  CHECK_THROWS(ApFunction::real_vector(1, {{Term{{0.5}, Complex(1.0), std::nullopt}}}));
}

TEST_CASE("translation twists coefficients") {
  const ApFunction f = ApFunction::scalar(1, {{{0.25}, Complex(1.0, 2.0), std::nullopt}, {{-1.5}, 0.5, std::nullopt}});
  const ApFunction g = f.translated({0.7});
  for (double x : {0.0, 1.3, -4.0}) CHECK(std::abs(g.value({x}) - f.value({x - 0.7})) < 1e-12);
  const ApFunction z = f.minus(f);
  CHECK(std::abs(z.value({3.0})) < 1e-15);
}

TEST_CASE("sup bound dominates samples") {
  std::vector<Term> terms = real_tone({1.0}, 0.5);
  for (const Term& t : real_tone({0.5}, 0.25)) terms.push_back(t);
  const ApFunction f = ApFunction::real_vector(1, {terms});
  CHECK(f.sup_bound() == doctest::Approx(0.75));
  const ApFunction two = ApFunction::real_vector(1, {real_tone({1.0}, 0.5), real_tone({0.5}, 0.25)});
  CHECK(two.out_dim() == 2);
  CHECK(two.sup_bound() == doctest::Approx(std::sqrt(0.5 * 0.5 + 0.25 * 0.25)));
  CHECK(sup_estimate(f, default_sample_grid(f)) <= f.sup_bound() + 1e-12);
  CHECK(sup_estimate(f, default_sample_grid(f)) == doctest::Approx(0.75).epsilon(1e-3));
}

TEST_CASE("frequency rows are deduplicated") {
  const ApFunction f = ApFunction::real_vector(2, {real_tone({1.0, 0.0}, 1.0), real_tone({1.0, 0.0}, 2.0)});
  const auto rows = f.frequency_rows();
  CHECK(rows.size() == 2);  // omega and -omega
}

TEST_CASE("exact periods are found") {
  const ApFunction f = ApFunction::real_vector(1, {real_tone({0.25}, 1.0)});
  const PeriodReport r = almost_periods(f, 1e-9, 20, 1);
  CHECK(r.periods == Vec{0, 4, 8, 12, 16, 20});
  CHECK(r.max_gap == doctest::Approx(4.0));
  for (double d : r.deviations) CHECK(d <= 1e-9);
}

TEST_CASE("almost periods of a quasiperiodic sum") {
  const double a = std::sqrt(2.0);
  std::vector<Term> terms = real_tone({1.0}, 1.0);
  for (const Term& t : real_tone({a}, 1.0)) terms.push_back(t);
  const ApFunction f = ApFunction::real_vector(1, {terms});
  const PeriodReport r = almost_periods(f, 0.2, 2000, 1);
  CHECK(r.periods.size() > 3);
  for (std::size_t i = 0; i < r.periods.size(); ++i) {
    const double t = r.periods[i];
    CHECK(r.deviations[i] <= 0.2);
    // exact deviation bound for integer t
    CHECK(2 * std::abs(std::sin(M_PI * a * t)) <= 0.2 + 1e-3);
  }
}

TEST_CASE("full periodicity on a lattice") {
  Eigen::MatrixXd gamma(1, 1);
  gamma << 1.0;
  const ApFunction g =
      ApFunction::real_vector(1, {real_tone({0.5}, 0.1, 0.0, std::vector<Rational>{Rational(1, 2)})});
  const FullPeriodicity fp = full_periodicity_on_lattice(g, gamma);
  CHECK(fp.commensurate);
  CHECK(fp.index == 2);
  CHECK(std::abs(fp.basis(0, 0)) == doctest::Approx(2.0));
  const ApFunction h = ApFunction::real_vector(1, {real_tone({std::sqrt(2.0)}, 0.1)});
  const FullPeriodicity no = full_periodicity_on_lattice(h, gamma);
  CHECK_FALSE(no.commensurate);
  CHECK_FALSE(no.reason.empty());
  // inexact float 0.5 does not count as rational
  const ApFunction f = ApFunction::real_vector(1, {real_tone({0.5}, 0.1)});
  CHECK_FALSE(full_periodicity_on_lattice(f, gamma).commensurate);
}

TEST_CASE("composition of modulations") {
  const ApFunction g1 = ApFunction::real_vector(1, {real_tone({0.3}, 0.1)});
  const ApFunction g2 = ApFunction::real_vector(1, {real_tone({0.7}, 0.2)});
  const ApFunction w1 = ApFunction::scalar(1, {{{0.0}, 1.0, std::nullopt}, {{0.2}, 0.3, std::nullopt}});
  const ApFunction w2 = ApFunction::scalar(1, {{{0.0}, 2.0, std::nullopt}, {{-0.4}, 0.1, std::nullopt}});
  const VectorField g = compose_modulation(g1, g2);
  const ScalarField w = compose_weight(w1, w2, g1);
  for (double x : {-2.0, 0.5, 9.0}) {
    const double y = x + g1.vector_value({x})[0];
    CHECK(g({x})[0] == doctest::Approx(y - x + g2.vector_value({y})[0]));
    CHECK(std::abs(w({x}) - w1.value({x}) * w2.value({y})) < 1e-14);
  }
}
