#pragma once

// Weighted Dirac combs as finite patches.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "apdiff/apfun.hpp"
#include "apdiff/box.hpp"
#include "apdiff/cps.hpp"
#include "apdiff/functions.hpp"

namespace apdiff {

// 64-bit FNV-1a of the text, as 16 hex digits.
std::string system_fingerprint_text(const std::string& text);

struct Atom {
  Vec position;
  Complex weight;
  std::optional<KLabel> label;
};

class WeightedComb {
 public:
  // `region` holds every atom; `exhaustive` is where the patch is known to
  // contain every atom of the infinite comb.
  WeightedComb(int dim, std::vector<Atom> atoms, Box region, Box exhaustive, std::string fingerprint = {});

  int dim() const { return dim_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  const Box& region() const { return region_; }
  const Box& exhaustive_region() const { return exhaustive_; }
  double region_volume() const { return region_.volume(); }
  const std::string& fingerprint() const { return fingerprint_; }

  // Coincident atoms (distance < tol) merged with summed weights, labels
  // dropped, sorted by position.
  WeightedComb canonical(double tol = 1e-12) const;
  // Largest total |weight| in a box of the given side placed anywhere (exact
  // for d = 1, an upper bound from a cell grid otherwise).
  double translation_bound(double side = 1.0) const;
  // Smallest distance between distinct canonical atoms; infinity with < 2.
  double min_separation() const;
  // Every atom moved by t, regions moved with it.
  WeightedComb translated(const Vec& t) const;
  // Atoms inside the box, regions intersected with it.
  WeightedComb restricted(const Box& box) const;
  WeightedComb with_fingerprint(std::string fingerprint) const;

 private:
  int dim_;
  std::vector<Atom> atoms_;
  Box region_;
  Box exhaustive_;
  std::string fingerprint_;
};

enum class PatchSelection {
  Deformed,  // keep atoms whose deformed position lies in the region
  Lattice,   // keep atoms whose lattice point l lies in the region
};

// Atoms (l + p(l*), f(l*)) for lattice points with l* in the support of f;
// sorted by label. With Lattice selection the raw region grows and the
// exhaustive region shrinks by sup |p|.
WeightedComb deformed_weighted_model_set(const CutProjectScheme& scheme, const WeightFunction& f,
                                         const DeformationMap& p, const Box& region,
                                         PatchSelection selection = PatchSelection::Deformed);

// Each atom (x, c) becomes (x + g(x), c w(x)).
WeightedComb modulate(const WeightedComb& comb, const ScalarField& w, const VectorField& g);

struct ComposedScheme {
  CutProjectScheme scheme;
  WeightFunction weight;
  DeformationMap deformation;
  std::vector<Vec> frequency_rows;  // rows carried by the appended torus
};

// Scheme extended by the frequency rows of g and w, with
//   p'(y, u) = p(y) + g_rep(u + W p(y)),  f'(y, u) = f(y) w_rep(u + W p(y)).
ComposedScheme realize_composed_scheme(const CutProjectScheme& scheme, const WeightFunction& f,
                                       const DeformationMap& p, const ApFunction& w, const ApFunction& g);

class IdealCrystal {
 public:
  // Offsets are reduced into the fundamental domain [0,1)^d of the basis;
  // offsets equal modulo the lattice are rejected.
  IdealCrystal(Eigen::MatrixXd gamma_basis, std::vector<Vec> offsets, double tol = 1e-9);

  int dim() const { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd& gamma_basis() const { return basis_; }
  const std::vector<Vec>& offsets() const { return offsets_; }

  // Unit-weight patch of Gamma + F inside `region` (exhaustive there).
  WeightedComb patch(const Box& region) const;
  // Physical offset in lattice coordinates, reduced to [0,1)^d.
  Vec reduce(const Vec& x) const;

 private:
  Eigen::MatrixXd basis_;
  std::vector<Vec> offsets_;
  double tol_;
};

// Lambda^g = L + F_g for a displacement fully periodic on the sublattice L.
IdealCrystal commensurate_modulate(const IdealCrystal& crystal, const ApFunction& g);

struct PeriodGroup {
  Eigen::MatrixXd basis;  // columns
  std::vector<Vec> offsets;
  int candidates_tested = 0;
  int periods_validated = 0;
};

// Lattice of translations t with t + Lambda = Lambda on the patch, checked on
// the exhaustive region. Returns nullopt when the validated periods do not
// span R^d. Only differences of the 50 lowest atoms are tried.
std::optional<PeriodGroup> period_group(const WeightedComb& comb, double tol = 1e-9);

// d = 1: sup over x in `range` of |phi(x - t) - phi(x)| where phi is the comb
// convolved with the tent max(0, 1 - |x|/h). Exact: the difference is
// piecewise linear and is evaluated at all kinks.
double smoothed_translation_deviation(const WeightedComb& comb, double h, double t, Interval range);

}  // namespace apdiff
