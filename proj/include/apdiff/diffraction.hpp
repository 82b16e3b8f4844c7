#pragma once

// Diffraction amplitudes: closed form by internal-space quadrature, and
// empirical Fourier-Bohr averages over finite patches.

#include <string>
#include <vector>

#include "apdiff/box.hpp"
#include "apdiff/combs.hpp"
#include "apdiff/cps.hpp"
#include "apdiff/functions.hpp"
#include "apdiff/groups.hpp"

namespace apdiff {

std::string system_fingerprint(const CutProjectScheme& scheme, const WeightFunction& f, const DeformationMap& p);

// a = dens * int_H conj(chi*(y)) e(xi . p(y)) f(y) dm_H(y). Euclidean bounds
// default to the bounding box of the support of f.
Complex amplitude_dynamical(const CutProjectScheme& scheme, const WeightFunction& f, const DeformationMap& p,
                            const DualCharacter& chi, const QuadratureOptions& options = {});

// |int_0^1 e(n s + (m + alpha n) eps sin(2 pi s)) ds|^2 by its own trapezoid rule.
double sine_modulated_amplitude(long long m, long long n, double epsilon, double alpha, int nodes = 1024);

// (1 / vol B) sum_{x in B} w(x) e(-xi . x). B must lie in the exhaustive region.
Complex fourier_bohr_empirical(const WeightedComb& comb, const Vec& xi, const Box& window);
std::vector<Complex> fourier_bohr_sequence(const WeightedComb& comb, const Vec& xi, const std::vector<Box>& windows);

struct SpectrumEntry {
  DualCharacter character;
  Complex amplitude;
  double intensity = 0.0;
};

struct Spectrum {
  int phys_dim = 1;
  std::vector<SpectrumEntry> entries;  // intensity descending, then label
  std::string fingerprint;
  double freq_cutoff = 0.0;
  int label_bound = 0;
  double min_intensity = 0.0;
  double total_intensity = 0.0;
  double autocorr_at_zero = 0.0;  // dens * int |f|^2
  std::string completeness_note;
};

Spectrum spectrum(const CutProjectScheme& scheme, const WeightFunction& f, const DeformationMap& p,
                  double freq_cutoff, int label_bound, double min_intensity,
                  const QuadratureOptions& options = {});

struct Autocorrelation {
  std::vector<std::pair<Vec, Complex>> coefficients;  // sorted by z
  double max_radius = 0.0;
  double normalization_volume = 0.0;
  Complex at(const Vec& z, double tol) const;
};

// eta(z) = (1 / vol E) sum_{x in E, y} w(x) conj(w(y)) over x - y close to z,
// E the exhaustive region eroded by max_radius. Differences within bin_tol
// are pooled.
Autocorrelation autocorrelation(const WeightedComb& comb, double max_radius, double bin_tol);

struct PeakCheck {
  KLabel label;
  Vec freq;
  Complex dynamical;
  Complex empirical;
  double intensity_deviation = 0.0;
};

struct ParsevalReport {
  double total_intensity = 0.0;
  double autocorr_at_zero = 0.0;     // from the spectrum
  double empirical_eta0 = 0.0;       // from the comb
  double captured_fraction = 0.0;    // total / autocorr_at_zero
  int peak_classes = 0;              // distinct physical-lattice labels m
  double per_class_fraction = 0.0;   // total / (peak_classes * autocorr_at_zero)
  std::vector<PeakCheck> peaks;
};

ParsevalReport parseval_report(const Spectrum& spectrum, const CutProjectScheme& scheme, const WeightedComb& comb,
                               int top_n = 5);

}  // namespace apdiff
