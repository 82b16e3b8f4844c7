#include <doctest.h>

#include <cmath>
#include <random>

#include "apdiff/config.hpp"
#include "apdiff/diffraction.hpp"
#include "support.hpp"

using namespace apdiff;

namespace {

std::mt19937_64& rng() {
  static std::mt19937_64 g(20261016);
  return g;
}

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }
int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

InternalSpace mixed_space() { return InternalSpace({Factor::euclidean(1), Factor::torus(2), Factor::cyclic(6)}); }

InternalPoint random_point(const InternalSpace& h) {
  return h.point({uniform(-5, 5), uniform(0, 1), uniform(0, 1), double(uniform_int(0, 5))});
}

InternalCharacter random_character(const InternalSpace& h) {
  return h.character({uniform(-3, 3), double(uniform_int(-4, 4)), double(uniform_int(-4, 4)), double(uniform_int(0, 5))});
}

ApFunction random_tones(int count, double amp) {
  std::vector<Term> terms;
  for (int i = 0; i < count; ++i) {
    const auto t = real_tone({uniform(-1, 1)}, uniform(0, amp), uniform(0, kTwoPi));
    terms.insert(terms.end(), t.begin(), t.end());
  }
  return ApFunction::real_vector(1, {terms});
}

}  // namespace

TEST_CASE("characters are multiplicative") {
  const InternalSpace h = mixed_space();
  for (int trial = 0; trial < 200; ++trial) {
    const InternalCharacter chi = random_character(h);
    const InternalPoint a = random_point(h), b = random_point(h);
    const Complex lhs = evaluate_character(chi, add(a, b));
    const Complex rhs = evaluate_character(chi, a) * evaluate_character(chi, b);
    CHECK(std::abs(lhs - rhs) < 1e-11);
    CHECK(std::abs(evaluate_character(chi, negate(a)) - std::conj(evaluate_character(chi, a))) < 1e-11);
  }
}

TEST_CASE("Haar measure is translation invariant") {
  const InternalSpace h({Factor::torus(1), Factor::cyclic(5)});
  auto f = [](const InternalPoint& y) {
    return Complex(std::exp(std::cos(kTwoPi * y[0])) * (1 + y[1] * y[1]), std::sin(kTwoPi * 2 * y[0]));
  };
  const Complex base = quadrature(h, f);
  for (int trial = 0; trial < 20; ++trial) {
    const InternalPoint t = h.point({uniform(0, 1), double(uniform_int(0, 4))});
    const Complex moved = quadrature(h, [&](const InternalPoint& y) { return f(add(y, t)); });
    CHECK(std::abs(moved - base) < 1e-12);
  }
}

TEST_CASE("star map is additive") {
  const CutProjectScheme s = fibonacci_scheme();
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<long long> a{uniform_int(-50, 50), uniform_int(-50, 50)};
    const std::vector<long long> b{uniform_int(-50, 50), uniform_int(-50, 50)};
    const std::vector<long long> ab{a[0] + b[0], a[1] + b[1]};
    const StarImage x = star(s, a), y = star(s, b), z = star(s, ab);
    CHECK(z.phys[0] == doctest::Approx(x.phys[0] + y.phys[0]));
    CHECK(z.internal[0] == doctest::Approx(x.internal[0] + y.internal[0]));
  }
}

TEST_CASE("model sets grow with the window") {
  const CutProjectScheme s = fibonacci_scheme();
  const InternalSpace& h = s.internal();
  for (int trial = 0; trial < 20; ++trial) {
    const double lo = uniform(-1, 0), hi = uniform(0, 1), grow = uniform(0, 0.5);
    const Window small(h, {FactorWindow::box({{lo, hi}})});
    const Window big(h, {FactorWindow::box({{lo - grow, hi + grow}})});
    CHECK(small.subset_of(big));
    const auto a = enumerate_model_set(s, small, Box::cube(1, 60));
    const auto b = enumerate_model_set(s, big, Box::cube(1, 60));
    CHECK(a.size() <= b.size());
    std::size_t j = 0;
    for (const auto& p : a) {
      while (j < b.size() && b[j].k != p.k) ++j;
      CHECK(j < b.size());
    }
  }
}

TEST_CASE("re-embedding into an extended scheme keeps the comb") {
  const auto sys = testing_support::sine_system(0.1, golden4());
  for (int trial = 0; trial < 5; ++trial) {
    const CutProjectScheme ext = extend_scheme(sys.scheme, {Vec{uniform(-2, 2)}});
    const WeightFunction f = sys.weight.lifted_to(ext.internal());
    const DeformationMap p = sys.deformation.lifted_to(ext.internal());
    const WeightedComb a = deformed_weighted_model_set(sys.scheme, sys.weight, sys.deformation, Box::cube(1, 100));
    const WeightedComb b = deformed_weighted_model_set(ext, f, p, Box::cube(1, 100));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a.atoms()[i].position[0] == b.atoms()[i].position[0]);
      CHECK(a.atoms()[i].weight == b.atoms()[i].weight);
    }
    CHECK(ext.density() == doctest::Approx(sys.scheme.density()));
  }
}

TEST_CASE("spectra are Hermitian") {
  const auto sys = testing_support::sine_system(0.2, 0.3090169943749474);
  for (int trial = 0; trial < 10; ++trial) {
    const KLabel l{uniform_int(-3, 3), uniform_int(-3, 3)};
    const DualCharacter chi = dual_character(sys.scheme, l);
    const DualCharacter inv = dual_character(sys.scheme, negated_label(sys.scheme, l));
    const Complex a = amplitude_dynamical(sys.scheme, sys.weight, sys.deformation, chi);
    const Complex b = amplitude_dynamical(sys.scheme, sys.weight, sys.deformation, inv);
    // real weights: a(-xi) = conj a(xi)
    CHECK(std::abs(b - std::conj(a)) < 1e-12);
  }
}

TEST_CASE("sequential modulation equals the composed one") {
  const auto sys = testing_support::sine_system(0.05, golden4());
  const WeightedComb base = deformed_weighted_model_set(sys.scheme, sys.weight, sys.deformation, Box::cube(1, 80),
                                                        PatchSelection::Lattice);
  for (int trial = 0; trial < 10; ++trial) {
    const ApFunction g1 = random_tones(uniform_int(1, 3), 0.1);
    const ApFunction g2 = random_tones(uniform_int(1, 3), 0.1);
    const ApFunction w1 = ApFunction::scalar(1, {{{0.0}, 1.0, std::nullopt}, {{uniform(-1, 1)}, 0.2, std::nullopt}});
    const ApFunction w2 = ApFunction::scalar(1, {{{0.0}, 1.0, std::nullopt}, {{uniform(-1, 1)}, 0.3, std::nullopt}});
    const WeightedComb seq = modulate(modulate(base, w1, g1), w2, g2);
    const WeightedComb one = modulate(base, compose_weight(w1, w2, g1), compose_modulation(g1, g2));
    REQUIRE(seq.size() == one.size());
    for (std::size_t i = 0; i < seq.size(); ++i) {
      CHECK(std::abs(seq.atoms()[i].position[0] - one.atoms()[i].position[0]) < 1e-12);
      CHECK(std::abs(seq.atoms()[i].weight - one.atoms()[i].weight) < 1e-12);
    }
  }
}

TEST_CASE("empirical amplitudes are translation covariant") {
  const auto sys = testing_support::sine_system(0.05, golden4());
  const WeightedComb c = deformed_weighted_model_set(sys.scheme, sys.weight, sys.deformation, Box::cube(1, 400));
  for (int trial = 0; trial < 10; ++trial) {
    const double t = uniform(-50, 50), xi = uniform(-2, 2);
    const Complex a = fourier_bohr_empirical(c, {xi}, Box::cube(1, 300));
    const Box moved{{-300 + t}, {300 + t}};
    const Complex b = fourier_bohr_empirical(c.translated({t}), {xi}, moved);
    CHECK(std::abs(b - a * std::polar(1.0, -kTwoPi * xi * t)) < 1e-12);
  }
}

TEST_CASE("config documents survive a canonical round trip") {
  const char* docs[] = {
      R"({"preset":"sine","epsilon":0.05,"alpha":"golden4"})",
      R"({"preset":"fibonacci","weight":"indicator"})",
      R"({"preset":"ideal_crystal","gamma_basis":[[1,0],[0.5,1]],"offsets":[[0,0],[0.5,0.5]]})",
      R"({"phys_dim":1,"internal":[{"torus":1},{"cyclic":3}],"generators":[{"phys":[1],"internal":[0.3,1]}],
          "weight":{"family":"cyclic_table","table":[{"residues":[0],"value":1},{"residues":[2],"value":[0,1]}]},
          "deformation":{"family":"zero"}})",
  };
  for (const char* text : docs) {
    const Json doc = parse_json_text(text);
    const std::string dumped = canonical_dump(doc);
    CHECK(parse_json_text(dumped) == doc);
    const SystemConfig a = load_config(doc);
    const SystemConfig b = load_config(parse_json_text(dumped));
    CHECK(system_fingerprint(a.scheme, a.weight, a.deformation) ==
          system_fingerprint(b.scheme, b.weight, b.deformation));
  }
}
