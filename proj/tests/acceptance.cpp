// Prints one PASS/FAIL line per acceptance criterion, then a summary line.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "apdiff/config.hpp"
#include "apdiff/diffraction.hpp"
#include "apdiff/errors.hpp"
#include "oracles/bessel.hpp"
#include "support.hpp"

using namespace apdiff;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

EffectiveSystem sine_preset() {
  return effective_system(load_config(parse_json_text(R"({"preset":"sine","epsilon":0.05,"alpha":"golden4"})")));
}

Outcome sine_spectrum_check() {
  const auto t0 = Clock::now();
  const EffectiveSystem s = sine_preset();
  const Spectrum sp = spectrum(s.scheme, s.weight, s.deformation, 4.0, 3, 0.0);
  const double secs = seconds_since(t0);
  double worst = 0, origin = -1;
  for (const auto& e : sp.entries) {
    const long long m = e.character.label[0], n = e.character.label[1];
    worst = std::max(worst, std::abs(e.intensity - oracle::sine_peak_intensity(m, -n, 0.05, golden4())));
    if (m == 0 && n == 0) origin = e.intensity;
  }
  const bool ok = sp.entries.size() == 49 && worst <= 1e-8 && std::abs(origin - 1) <= 1e-12 && secs < 5;
  return {ok, std::to_string(sp.entries.size()) + " peaks, max |I - J_n^2| " + fmt("%.2e", worst) +
                  ", I(0,0)-1 " + fmt("%.1e", origin - 1) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome dual_path() {
  const auto t0 = Clock::now();
  const EffectiveSystem s = sine_preset();
  const Spectrum sp = spectrum(s.scheme, s.weight, s.deformation, 4.0, 3, 0.0);
  const WeightedComb comb = deformed_weighted_model_set(s.scheme, s.weight, s.deformation, Box::cube(1, 1e5 + 1));
  const std::vector<Box> boxes{Box::cube(1, 1e3), Box::cube(1, 1e4), Box::cube(1, 1e5)};
  std::vector<double> worst(boxes.size(), 0.0);
  for (std::size_t i = 0; i < 9 && i < sp.entries.size(); ++i) {
    const auto vals = fourier_bohr_sequence(comb, sp.entries[i].character.freq, boxes);
    for (std::size_t j = 0; j < boxes.size(); ++j) {
      worst[j] = std::max(worst[j], std::abs(std::norm(vals[j]) - sp.entries[i].intensity));
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = worst[2] <= 1e-2 && worst[2] < worst[1] && worst[1] < worst[0] && secs < 60;
  return {ok, "max intensity error at half width 1e3/1e4/1e5: " + fmt("%.2e", worst[0]) + " / " +
                  fmt("%.2e", worst[1]) + " / " + fmt("%.2e", worst[2]) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome formula_identity() {
  const double a = golden4();
  double worst = 0;
  for (double eps : {0.02, 0.05, 0.2}) {
    const auto s = testing_support::sine_system(eps, a);
    for (long long m = -3; m <= 3; ++m) {
      for (long long n = -3; n <= 3; ++n) {
        const double closed = sine_modulated_amplitude(m, n, eps, a);
        const DualCharacter chi = dual_character(s.scheme, {m, -n});
        const double dyn = std::norm(amplitude_dynamical(s.scheme, s.weight, s.deformation, chi));
        worst = std::max(worst, std::abs(closed - dyn));
      }
    }
  }
  return {worst <= 1e-10, "147 comparisons, max difference " + fmt("%.2e", worst)};
}

Outcome lattice_sanity() {
  const auto s = testing_support::integer_system();
  const Spectrum sp = spectrum(s.scheme, s.weight, s.deformation, 2.5, 3, 0.0);
  double worst = 0;
  std::vector<double> xs;
  for (const auto& e : sp.entries) {
    worst = std::max(worst, std::abs(e.intensity - 1));
    xs.push_back(e.character.freq[0]);
  }
  std::sort(xs.begin(), xs.end());
  bool positions = xs.size() == 5;
  for (std::size_t i = 0; positions && i < 5; ++i) positions = std::abs(xs[i] - (double(i) - 2)) < 1e-12;
  const WeightedComb z = deformed_weighted_model_set(s.scheme, s.weight, s.deformation, Box::cube(1, 5000));
  const double half = std::abs(fourier_bohr_empirical(z, {0.5}, Box::cube(1, 5000)));
  return {positions && worst <= 1e-12 && half <= 1e-3,
          std::to_string(sp.entries.size()) + " peaks at -2..2, max |I-1| " + fmt("%.1e", worst) +
              ", |a(1/2)| at N=1e4 " + fmt("%.1e", half)};
}

Outcome parseval() {
  const EffectiveSystem s = sine_preset();
  const Spectrum sp = spectrum(s.scheme, s.weight, s.deformation, 1e9, 8, 0.0);
  const WeightedComb comb = deformed_weighted_model_set(s.scheme, s.weight, s.deformation, Box::cube(1, 1e4));
  const ParsevalReport r = parseval_report(sp, s.scheme, comb, 5);
  const bool ok = r.captured_fraction >= 0.9 && r.captured_fraction <= 1 + 1e-6 &&
                  std::abs(r.empirical_eta0 - 1) <= 1e-3;
  return {ok, "sum I / eta(0) = " + fmt("%.6f", r.captured_fraction) + " over " + std::to_string(r.peak_classes) +
                  " m-classes (per class " + fmt("%.6f", r.per_class_fraction) + "), eta(0) = " +
                  fmt("%.6f", r.empirical_eta0)};
}

ApFunction random_displacement(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0, 1);
  const int tones = 1 + static_cast<int>(g() % 3);
  std::vector<Term> terms;
  for (int i = 0; i < tones; ++i) {
    const auto t = real_tone({2 * u(g) - 1}, 0.15 * u(g), kTwoPi * u(g));
    terms.insert(terms.end(), t.begin(), t.end());
  }
  return ApFunction::real_vector(1, {terms});
}

ApFunction random_weight(std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0, 1);
  const int tones = 1 + static_cast<int>(g() % 3);
  std::vector<Term> terms{{{0.0}, 1.0, std::nullopt}};
  for (int i = 0; i < tones; ++i) {
    terms.push_back({{2 * u(g) - 1}, std::polar(0.2 * u(g), kTwoPi * u(g)), std::nullopt});
  }
  return ApFunction::scalar(1, terms);
}

double comb_distance(const WeightedComb& a, const WeightedComb& b) {
  if (a.size() != b.size()) return INFINITY;
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a.atoms()[i].position[0] - b.atoms()[i].position[0]));
    d = std::max(d, std::abs(a.atoms()[i].weight - b.atoms()[i].weight));
  }
  return d;
}

Outcome modulation_stability() {
  std::mt19937_64 g(6);
  const auto s = testing_support::sine_system(0.05, golden4());
  const Box box = Box::cube(1, 200);
  const WeightedComb base = deformed_weighted_model_set(s.scheme, s.weight, s.deformation, box, PatchSelection::Lattice);
  double seq_vs_composed = 0, scheme_vs_modulate = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const ApFunction g1 = random_displacement(g), g2 = random_displacement(g);
    const ApFunction w1 = random_weight(g), w2 = random_weight(g);
    const WeightedComb seq = modulate(modulate(base, w1, g1), w2, g2);
    const WeightedComb once = modulate(base, compose_weight(w1, w2, g1), compose_modulation(g1, g2));
    seq_vs_composed = std::max(seq_vs_composed, comb_distance(seq, once));
    const ComposedScheme cs = realize_composed_scheme(s.scheme, s.weight, s.deformation, w1, g1);
    const WeightedComb lifted =
        deformed_weighted_model_set(cs.scheme, cs.weight, cs.deformation, box, PatchSelection::Lattice);
    scheme_vs_modulate = std::max(scheme_vs_modulate, comb_distance(lifted, modulate(base, w1, g1)));
  }
  return {seq_vs_composed <= 1e-12 && scheme_vs_modulate <= 1e-12,
          "20 trials, sequential vs composed " + fmt("%.1e", seq_vs_composed) + ", composed scheme vs modulate " +
              fmt("%.1e", scheme_vs_modulate)};
}

std::vector<double> positions(const WeightedComb& c) {
  std::vector<double> x;
  for (const Atom& a : c.atoms()) x.push_back(a.position[0]);
  std::sort(x.begin(), x.end());
  return x;
}

Outcome ideal_crystals() {
  Eigen::MatrixXd one(1, 1);
  one << 1.0;
  // Z + {0, 1/2} collapses to (1/2)Z
  const IdealCrystal half(one, {{0.0}, {0.5}});
  const auto pg = period_group(half.patch(Box::cube(1, 40)));
  const bool collapse = pg && std::abs(std::abs(pg->basis(0, 0)) - 0.5) < 1e-12 && pg->offsets.size() == 1;

  const IdealCrystal z(one, {{0.0}});
  const ApFunction g =
      ApFunction::real_vector(1, {real_tone({0.5}, 0.1, 0.0, std::vector<Rational>{Rational(1, 2)})});
  const IdealCrystal zg = commensurate_modulate(z, g);
  bool offsets_ok = zg.offsets().size() == 2 && std::abs(std::abs(zg.gamma_basis()(0, 0)) - 2) < 1e-12;
  if (offsets_ok) {
    std::vector<double> f;
    for (const Vec& o : zg.offsets()) f.push_back(o[0]);
    std::sort(f.begin(), f.end());
    offsets_ok = std::abs(f[0] - 0.1) < 1e-12 && std::abs(f[1] - 0.9) < 1e-12;
  }
  const WeightedComb direct = modulate(z.patch(Box::cube(1, 40)), ScalarField::one(1), g);
  const Box inner = Box::cube(1, 30.5);
  const std::vector<double> a = positions(direct.restricted(inner));
  const std::vector<double> b = positions(zg.patch(inner));
  bool match = a.size() == b.size() && !a.empty();
  for (std::size_t i = 0; match && i < a.size(); ++i) match = std::abs(a[i] - b[i]) < 1e-12;
  const auto pg2 = period_group(direct.restricted(inner));
  const bool period2 = pg2 && std::abs(std::abs(pg2->basis(0, 0)) - 2) < 1e-9 && pg2->offsets.size() == 2;

  Eigen::MatrixXd b2(2, 2);
  b2 << 1.0, 0.5, 0.0, 1.5;
  const std::vector<Vec> offs{{0.0, 0.0}, {0.25, 0.5}, {0.75, 0.1}};
  const IdealCrystal c2(b2, offs);
  const IdealCrystalScheme ics = ideal_crystal_scheme(b2, offs);
  const Box region = Box::cube(2, 6);
  std::vector<Vec> p1, p2;
  const WeightedComb patch = c2.patch(region);
  for (const Atom& at : patch.atoms()) p1.push_back(at.position);
  for (const ModelPoint& mp : enumerate_model_set(ics.scheme, ics.window, region)) p2.push_back(mp.phys);
  // every point has a partner within 1e-12, both ways
  auto covered = [](const std::vector<Vec>& from, const std::vector<Vec>& to) {
    for (const Vec& x : from) {
      bool hit = false;
      for (const Vec& y : to) hit = hit || (std::abs(x[0] - y[0]) < 1e-12 && std::abs(x[1] - y[1]) < 1e-12);
      if (!hit) return false;
    }
    return true;
  };
  const bool round_trip = !p1.empty() && p1.size() == p2.size() && covered(p1, p2) && covered(p2, p1);
  auto yn = [](bool b) { return b ? "yes" : "no"; };
  return {collapse && offsets_ok && match && period2 && round_trip,
          std::string("collapse to (1/2)Z ") + yn(collapse) + ", F_g = {0.1, 0.9} on 2Z " + yn(offsets_ok) +
              ", matches direct " + yn(match) + ", direct periods 2Z " + yn(period2) + ", CPS round trip (" +
              std::to_string(p1.size()) + " points) " + yn(round_trip)};
}

Outcome almost_period_evidence() {
  const EffectiveSystem s = sine_preset();
  const InternalSpace& h = s.scheme.internal();
  const Window v(h, {FactorWindow::box({{-0.01, 0.01}})});
  std::vector<double> ts;
  for (const ModelPoint& mp : enumerate_model_set(s.scheme, v, Box::interval(0, 1e4))) ts.push_back(mp.phys[0]);
  std::sort(ts.begin(), ts.end());
  const WeightedComb comb = deformed_weighted_model_set(s.scheme, s.weight, s.deformation, Box::cube(1, 2e4 + 2));
  const double eps = 0.05;
  double worst = 0, gap = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    worst = std::max(worst, smoothed_translation_deviation(comb, 0.5, ts[i], {-1e4, 1e4}));
    if (i) gap = std::max(gap, ts[i] - ts[i - 1]);
  }
  gap = std::max(gap, 1e4 - (ts.empty() ? 0 : ts.back()));
  return {ts.size() > 1 && worst <= eps && gap <= 200,
          std::to_string(ts.size()) + " t in [0, 1e4], max deviation " + fmt("%.4f", worst) + " (eps " +
              fmt("%.2f", eps) + "), max gap " + fmt("%.0f", gap)};
}

Outcome discreteness() {
  const double a = golden4();
  const auto s = testing_support::sine_system(0.2, a);
  const WeightedComb c = deformed_weighted_model_set(s.scheme, s.weight, s.deformation, Box::interval(-5000, 4999),
                                                     PatchSelection::Lattice);
  const double gap = c.canonical().min_separation();
  const double bound = 1 - 2 * 0.2 * std::sin(M_PI * a);
  const double alt = golden_mean() - 1;
  const auto s2 = testing_support::sine_system(0.6, alt);
  const WeightedComb c2 = deformed_weighted_model_set(s2.scheme, s2.weight, s2.deformation,
                                                      Box::interval(-5000, 4999), PatchSelection::Lattice);
  const double gap2 = c2.canonical().min_separation();
  return {c.size() == 10000 && std::abs(gap - bound) <= 1e-6 && gap2 < 0.05,
          std::to_string(c.size()) + " atoms, eps 0.2 gap " + fmt("%.9f", gap) + " vs bound " + fmt("%.9f", bound) +
              "; eps 0.6 (alpha tau-1) gap " + fmt("%.2e", gap2)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks{
      {"1 sine spectrum vs Bessel oracle", sine_spectrum_check},
      {"2 dual-path agreement", dual_path},
      {"3 closed form vs quadrature", formula_identity},
      {"4 integer lattice sanity", lattice_sanity},
      {"5 Parseval bound", parseval},
      {"6 modulation stability", modulation_stability},
      {"7 ideal crystals", ideal_crystals},
      {"8 almost periods", almost_period_evidence},
      {"9 uniform discreteness threshold", discreteness},
  };
  int passed = 0;
  for (const auto& [name, fn] : checks) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    passed += o.pass;
    std::printf("criterion %s: %s - %s\n", name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance run complete: %d/%zu passed\n", passed, checks.size());
  return 0;
}
