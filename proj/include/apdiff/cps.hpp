#pragma once

// Cut-and-project schemes over physical space R^d.
//
// A scheme is given by r generators (v_i, s_i) in R^d x H. The lattice is
// {sum k_i (v_i, s_i) : k in Z^r}; the star map sends sum k_i v_i to
// sum k_i s_i. Compact internal factors add no rank, so r = d + e where e is
// the Euclidean internal dimension.

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "apdiff/box.hpp"
#include "apdiff/groups.hpp"

namespace apdiff {

using KLabel = std::vector<long long>;

struct LatticeGenerator {
  Vec phys;
  InternalPoint internal;
};

struct SchemeOptions {
  // No nonzero k with |k|_inf <= horizon may project to 0.
  int injectivity_horizon = 10;
  double injectivity_tol = 1e-9;
};

class CutProjectScheme {
 public:
  CutProjectScheme(int phys_dim, InternalSpace internal, std::vector<LatticeGenerator> generators,
                   SchemeOptions options = {});

  int phys_dim() const { return phys_dim_; }
  int rank() const { return static_cast<int>(generators_.size()); }
  const InternalSpace& internal() const { return internal_; }
  const std::vector<LatticeGenerator>& generators() const { return generators_; }

  // Inverse Haar measure of a fundamental domain of the lattice.
  double density() const { return density_; }

  // Square (d+e) x r matrix; column i is (v_i, Euclidean part of s_i).
  const Eigen::MatrixXd& embedding() const { return embedding_; }

  // Canonical text form, used for fingerprints.
  std::string describe() const;

 private:
  int phys_dim_;
  InternalSpace internal_;
  std::vector<LatticeGenerator> generators_;
  Eigen::MatrixXd embedding_;
  double density_ = 0.0;
};

struct StarImage {
  Vec phys;
  InternalPoint internal;
};

StarImage star(const CutProjectScheme& scheme, std::span<const long long> k);

// Per-factor window component. Boxes are half-open [lo, hi); a torus arc
// [lo, hi) is taken mod 1 and may wrap.
struct FactorWindow {
  enum class Kind { Full, Box, Residues };
  Kind kind = Kind::Full;
  std::vector<Interval> bounds;
  std::vector<long long> residues;

  static FactorWindow full() { return {}; }
  static FactorWindow box(std::vector<Interval> bounds) { return {Kind::Box, std::move(bounds), {}}; }
  static FactorWindow residue_set(std::vector<long long> residues) {
    return {Kind::Residues, {}, std::move(residues)};
  }
};

class Window {
 public:
  // One part per factor. `cyclic_tuples`, when non-empty, additionally
  // restricts the joint residue vector over all cyclic coordinates.
  Window(InternalSpace space, std::vector<FactorWindow> parts,
         std::set<std::vector<long long>> cyclic_tuples = {});

  static Window full(const InternalSpace& space);

  const InternalSpace& space() const { return space_; }
  const std::vector<FactorWindow>& parts() const { return parts_; }
  const std::set<std::vector<long long>>& cyclic_tuples() const { return cyclic_tuples_; }

  bool contains(const InternalPoint& y) const;

  // Bounding interval per Euclidean coordinate; throws PreconditionError when
  // a Euclidean factor is unbounded.
  std::vector<Interval> euclidean_bounds() const;

  // Same window inside a larger space whose leading factors are this space's;
  // the appended factors are taken in full.
  Window embedded_in(const InternalSpace& larger) const;

  // True when every point of this window lies in `other` (same space).
  bool subset_of(const Window& other) const;

  std::string describe() const;

 private:
  InternalSpace space_;
  std::vector<FactorWindow> parts_;
  std::set<std::vector<long long>> cyclic_tuples_;
};

struct ModelPoint {
  KLabel k;
  Vec phys;
  InternalPoint internal;
};

// All lattice points with phys in `region` (closed) and star in `window`,
// sorted by k lexicographically.
std::vector<ModelPoint> enumerate_model_set(const CutProjectScheme& scheme, const Window& window,
                                            const Box& region);

struct DualCharacter {
  // (m_1..m_r, torus labels, cyclic residues)
  KLabel label;
  Vec freq;
  InternalCharacter internal;
};

struct DualCharacterSet {
  std::vector<DualCharacter> characters;
  double freq_cutoff = 0.0;
  int label_bound = 0;
  std::string completeness_note;
};

// Dual lattice characters with |label|_inf <= label_bound (cyclic residues
// range over all classes) and |freq| <= freq_cutoff, sorted by label.
DualCharacterSet dual_characters(const CutProjectScheme& scheme, double freq_cutoff,
                                 int label_bound);

// The character with the given label, solved from the pairing relation.
DualCharacter dual_character(const CutProjectScheme& scheme, const KLabel& label);

// max_i |e(freq . v_i) * chi*(s_i) - 1|
double pairing_residual(const CutProjectScheme& scheme, const DualCharacter& chi);

// Label of the inverse character.
KLabel negated_label(const CutProjectScheme& scheme, const KLabel& label);

// Appends a Torus(s) factor carrying omega_j . v_i mod 1 for each generator.
CutProjectScheme extend_scheme(const CutProjectScheme& scheme, const std::vector<Vec>& mod_freqs);

// Star discrepancy of the samples of internal coordinate `coord` over a cube
// of lattice labels holding about `samples` points. Diagnostic for how well
// an added torus coordinate is filled by the lattice.
double equidistribution_discrepancy(const CutProjectScheme& scheme, int coord, long long samples);

struct IdealCrystalScheme {
  CutProjectScheme scheme;
  Window window;
  std::vector<long long> denominators;  // cyclic order per basis direction
};

// Scheme with finite internal space Gamma_ext / Gamma realizing Gamma + F.
// gamma_basis columns are the lattice basis vectors.
IdealCrystalScheme ideal_crystal_scheme(const Eigen::MatrixXd& gamma_basis,
                                        const std::vector<Vec>& offsets);

bool structurally_equal(const CutProjectScheme& a, const CutProjectScheme& b, double tol = 1e-12);

// 1/tau^4 with tau the golden mean.
double golden4();
double golden_mean();

// d = 1 presets.
CutProjectScheme sine_scheme(double alpha);
CutProjectScheme integer_scheme();
CutProjectScheme fibonacci_scheme();
// Window [-1, tau - 1) of the Fibonacci scheme.
Window fibonacci_window();

}  // namespace apdiff
