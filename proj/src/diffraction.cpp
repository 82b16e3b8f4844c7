#include "apdiff/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "apdiff/errors.hpp"
#include "apdiff/parallel.hpp"

namespace apdiff {

namespace {

Complex unit(double turns) { return std::polar(1.0, kTwoPi * (turns - std::round(turns))); }

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

QuadratureOptions with_support_bounds(const WeightFunction& f, QuadratureOptions options) {
  if (options.euclidean_bounds.empty() && f.space().euclidean_dim() > 0) {
    options.euclidean_bounds = f.support().euclidean_bounds();
  }
  return options;
}

}  // namespace

std::string system_fingerprint(const CutProjectScheme& scheme, const WeightFunction& f, const DeformationMap& p) {
  return system_fingerprint_text(scheme.describe() + "|" + f.describe() + "|" + p.describe());
}

Complex amplitude_dynamical(const CutProjectScheme& scheme, const WeightFunction& f, const DeformationMap& p,
                            const DualCharacter& chi, const QuadratureOptions& options) {
  if (!(f.space() == scheme.internal()) || !(p.space() == scheme.internal())) {
    throw StructuralError("weight and deformation must live on the scheme's internal space");
  }
  const Vec xi = chi.freq;
  const bool flat = p.is_zero();
  auto integrand = [&](const InternalPoint& y) -> Complex {
    const Complex fy = f(y);
    if (fy == Complex(0.0)) return fy;
    double turns = -character_phase(chi.internal, y);
    if (!flat) turns += dot(xi, p(y));
    return fy * unit(turns);
  };
  return scheme.density() * quadrature(scheme.internal(), integrand, with_support_bounds(f, options));
}

double sine_modulated_amplitude(long long m, long long n, double epsilon, double alpha, int nodes) {
  if (nodes < 1) throw PreconditionError("node count must be positive");
  const double z = (static_cast<double>(m) + alpha * static_cast<double>(n)) * epsilon;
  Complex s = 0.0;
  for (int j = 0; j < nodes; ++j) {
    const double t = static_cast<double>(j) / nodes;
    const double turns = static_cast<double>(n % nodes) * t + z * std::sin(kTwoPi * t);
    s += unit(turns);
  }
  return std::norm(s / static_cast<double>(nodes));
}

Complex fourier_bohr_empirical(const WeightedComb& comb, const Vec& xi, const Box& window) {
  require_dim(window, comb.dim(), "Fourier-Bohr window");
  if (static_cast<int>(xi.size()) != comb.dim()) throw StructuralError("frequency has wrong dimension");
  if (!comb.exhaustive_region().contains(window, 1e-9)) {
    throw PreconditionError("window " + describe(window) + " exceeds the exhaustive region " +
                            describe(comb.exhaustive_region()));
  }
  const double vol = window.volume();
  if (!(vol > 0)) throw PreconditionError("window has zero volume");
  Complex sum = 0.0, carry = 0.0;
  for (const Atom& a : comb.atoms()) {
    if (!window.contains(a.position)) continue;
    // compensated sum
    const Complex term = a.weight * unit(-dot(xi, a.position)) - carry;
    const Complex next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum / vol;
}

std::vector<Complex> fourier_bohr_sequence(const WeightedComb& comb, const Vec& xi, const std::vector<Box>& windows) {
  std::vector<Complex> out;
  for (const Box& b : windows) out.push_back(fourier_bohr_empirical(comb, xi, b));
  return out;
}

Spectrum spectrum(const CutProjectScheme& scheme, const WeightFunction& f, const DeformationMap& p,
                  double freq_cutoff, int label_bound, double min_intensity, const QuadratureOptions& options) {
  if (!(min_intensity >= 0)) throw PreconditionError("min_intensity must be non-negative");
  const DualCharacterSet duals = dual_characters(scheme, freq_cutoff, label_bound);
  const QuadratureOptions opts = with_support_bounds(f, options);

  std::vector<Complex> amps(duals.characters.size());
  parallel_for(amps.size(), [&](std::size_t i) {
    amps[i] = amplitude_dynamical(scheme, f, p, duals.characters[i], opts);
  });
  std::vector<SpectrumEntry> all;
  for (std::size_t i = 0; i < amps.size(); ++i) all.push_back({duals.characters[i], amps[i], std::norm(amps[i])});

  Spectrum s;
  s.phys_dim = scheme.phys_dim();
  s.fingerprint = system_fingerprint(scheme, f, p);
  s.freq_cutoff = freq_cutoff;
  s.label_bound = label_bound;
  s.min_intensity = min_intensity;
  s.completeness_note = duals.completeness_note;
  for (SpectrumEntry& e : all) {
    if (e.intensity >= min_intensity) s.entries.push_back(std::move(e));
  }
  std::sort(s.entries.begin(), s.entries.end(), [](const SpectrumEntry& a, const SpectrumEntry& b) {
    if (a.intensity != b.intensity) return a.intensity > b.intensity;
    return a.character.label < b.character.label;
  });
  for (const SpectrumEntry& e : s.entries) s.total_intensity += e.intensity;
  s.autocorr_at_zero =
      scheme.density() *
      quadrature(scheme.internal(), [&](const InternalPoint& y) { return Complex(std::norm(f(y))); }, opts).real();
  return s;
}

Complex Autocorrelation::at(const Vec& z, double tol) const {
  for (const auto& [v, eta] : coefficients) {
    double worst = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) worst = std::max(worst, std::abs(v[i] - z[i]));
    if (worst <= tol) return eta;
  }
  return 0.0;
}

Autocorrelation autocorrelation(const WeightedComb& comb, double max_radius, double bin_tol) {
  if (!(max_radius >= 0)) throw PreconditionError("radius must be non-negative");
  if (!(bin_tol > 0)) throw PreconditionError("bin tolerance must be positive");
  const int d = comb.dim();
  const Box& ex = comb.exhaustive_region();
  for (int i = 0; i < d; ++i) {
    if (max_radius > (ex.hi[i] - ex.lo[i]) / 2) {
      throw PreconditionError("radius exceeds the patch half width");
    }
  }
  const Box eroded = ex.shrunk(max_radius);
  const double vol = eroded.volume();
  if (!(vol > 0)) throw PreconditionError("eroded region is empty");

  std::vector<const Atom*> atoms;
  for (const Atom& a : comb.atoms()) atoms.push_back(&a);
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom* a, const Atom* b) { return a->position[0] < b->position[0]; });

  std::vector<std::pair<Vec, Complex>> diffs;
  for (const Atom* x : atoms) {
    if (!eroded.contains(x->position)) continue;
    auto it = std::lower_bound(atoms.begin(), atoms.end(), x->position[0] - max_radius - bin_tol,
                               [](const Atom* a, double v) { return a->position[0] < v; });
    for (; it != atoms.end() && (*it)->position[0] <= x->position[0] + max_radius + bin_tol; ++it) {
      Vec z(d);
      bool inside = true;
      for (int i = 0; i < d; ++i) {
        z[i] = x->position[i] - (*it)->position[i];
        inside &= std::abs(z[i]) <= max_radius + bin_tol;
      }
      if (inside) diffs.emplace_back(std::move(z), x->weight * std::conj((*it)->weight));
    }
  }
  std::sort(diffs.begin(), diffs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  Autocorrelation out;
  out.max_radius = max_radius;
  out.normalization_volume = vol;
  // pool differences that chain within bin_tol (lexicographic neighbours)
  std::vector<bool> used(diffs.size(), false);
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    if (used[i]) continue;
    Vec centre = diffs[i].first;
    Complex total = diffs[i].second;
    Vec acc = centre;
    int count = 1;
    used[i] = true;
    for (std::size_t j = i + 1; j < diffs.size() && diffs[j].first[0] <= centre[0] + bin_tol; ++j) {
      if (used[j]) continue;
      bool close = true;
      for (int k = 0; k < d; ++k) close &= std::abs(diffs[j].first[k] - centre[k]) <= bin_tol;
      if (!close) continue;
      used[j] = true;
      total += diffs[j].second;
      for (int k = 0; k < d; ++k) acc[k] += diffs[j].first[k];
      ++count;
    }
    for (int k = 0; k < d; ++k) acc[k] /= count;
    out.coefficients.emplace_back(std::move(acc), total / vol);
  }
  std::sort(out.coefficients.begin(), out.coefficients.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

ParsevalReport parseval_report(const Spectrum& spectrum, const CutProjectScheme& scheme, const WeightedComb& comb,
                               int top_n) {
  if (spectrum.fingerprint != comb.fingerprint()) {
    throw PreconditionError("spectrum fingerprint " + spectrum.fingerprint + " does not match comb fingerprint " +
                            comb.fingerprint());
  }
  ParsevalReport r;
  r.total_intensity = spectrum.total_intensity;
  r.autocorr_at_zero = spectrum.autocorr_at_zero;
  r.captured_fraction = r.autocorr_at_zero > 0 ? r.total_intensity / r.autocorr_at_zero : 0.0;
  const Autocorrelation eta = autocorrelation(comb, 0.0, 1e-12);
  r.empirical_eta0 = eta.at(Vec(comb.dim(), 0.0), 1e-12).real();

  std::set<KLabel> classes;
  for (const SpectrumEntry& e : spectrum.entries) {
    classes.insert(KLabel(e.character.label.begin(), e.character.label.begin() + scheme.rank()));
  }
  r.peak_classes = static_cast<int>(classes.size());
  if (r.peak_classes > 0 && r.autocorr_at_zero > 0) {
    r.per_class_fraction = r.total_intensity / (r.peak_classes * r.autocorr_at_zero);
  }
  for (int i = 0; i < top_n && i < static_cast<int>(spectrum.entries.size()); ++i) {
    const SpectrumEntry& e = spectrum.entries[i];
    PeakCheck pc;
    pc.label = e.character.label;
    pc.freq = e.character.freq;
    pc.dynamical = e.amplitude;
    pc.empirical = fourier_bohr_empirical(comb, e.character.freq, comb.exhaustive_region());
    pc.intensity_deviation = std::abs(std::norm(pc.empirical) - e.intensity);
    r.peaks.push_back(std::move(pc));
  }
  return r;
}

}  // namespace apdiff
