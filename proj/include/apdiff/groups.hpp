#pragma once

// Internal-space arithmetic: finite products of Euclidean, torus and
// finite-cyclic factors, their characters, and Haar-normalized quadrature.
//
// Coordinates are stored flat. A Euclidean(n) or Torus(n) factor occupies n
// consecutive coordinates, a Cyclic(q) factor occupies one coordinate holding
// its residue. Haar measure is Lebesgue on Euclidean factors, total mass 1 on
// torus factors, and normalized counting measure (mass 1/q per residue) on
// cyclic factors.

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace apdiff {

using Complex = std::complex<double>;
using Vec = std::vector<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class FactorKind { Euclidean, Torus, Cyclic };

struct Factor {
  FactorKind kind;
  int size;  // dimension for Euclidean/Torus, order for Cyclic

  static Factor euclidean(int dim) { return {FactorKind::Euclidean, dim}; }
  static Factor torus(int dim) { return {FactorKind::Torus, dim}; }
  static Factor cyclic(int order) { return {FactorKind::Cyclic, order}; }

  int coordinate_count() const { return kind == FactorKind::Cyclic ? 1 : size; }
  bool operator==(const Factor&) const = default;
};

std::string to_string(const Factor& f);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

class InternalPoint;
class InternalCharacter;

// Immutable list of factors. Copies share the factor storage.
class InternalSpace {
 public:
  explicit InternalSpace(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return *factors_; }
  int coordinate_count() const { return coord_count_; }
  // First flat coordinate of factor i.
  int offset(std::size_t factor) const { return offsets_[factor]; }
  FactorKind kind_of_coordinate(int coord) const { return coord_kind_[coord]; }
  // Cyclic order for a cyclic coordinate, 0 otherwise.
  int order_of_coordinate(int coord) const { return coord_order_[coord]; }

  int euclidean_dim() const { return euclidean_dim_; }
  int torus_dim() const { return torus_dim_; }
  int cyclic_count() const { return cyclic_count_; }
  bool is_compact() const { return euclidean_dim_ == 0; }

  InternalPoint identity() const;
  // Builds a point from raw coordinates, reducing torus/cyclic parts.
  InternalPoint point(Vec coords) const;
  InternalCharacter character(Vec labels) const;

  // This space followed by the factors of `other`.
  InternalSpace product(const InternalSpace& other) const;
  // Drops Cyclic(1) factors, which carry no information.
  InternalSpace without_trivial_factors() const;

  std::string describe() const;

  bool operator==(const InternalSpace& other) const;

 private:
  std::shared_ptr<const std::vector<Factor>> factors_;
  std::vector<int> offsets_;
  std::vector<FactorKind> coord_kind_;
  std::vector<int> coord_order_;
  int coord_count_ = 0;
  int euclidean_dim_ = 0;
  int torus_dim_ = 0;
  int cyclic_count_ = 0;
};

// Reduces coordinate `c` of `space` in place: torus to [0,1), cyclic to
// {0..q-1}.
void reduce_coordinate(const InternalSpace& space, int c, double& value);

class InternalPoint {
 public:
  InternalPoint(InternalSpace space, Vec coords);  // coords must be reduced

  const InternalSpace& space() const { return space_; }
  const Vec& coords() const { return coords_; }
  double operator[](std::size_t i) const { return coords_[i]; }

  // Sub-vectors by coordinate kind, in flat order.
  Vec euclidean_part() const;
  Vec torus_part() const;
  std::vector<long long> cyclic_part() const;

 private:
  InternalSpace space_;
  Vec coords_;
};

// Per-coordinate labels: real frequency (Euclidean), integer (Torus),
// residue mod q (Cyclic).
class InternalCharacter {
 public:
  InternalCharacter(InternalSpace space, Vec labels);

  const InternalSpace& space() const { return space_; }
  const Vec& labels() const { return labels_; }

 private:
  InternalSpace space_;
  Vec labels_;
};

InternalPoint add(const InternalPoint& a, const InternalPoint& b);
InternalPoint negate(const InternalPoint& a);

// Phase of chi at y in turns, i.e. chi(y) = exp(2 pi i * phase).
double character_phase(const InternalCharacter& chi, const InternalPoint& y);
Complex evaluate_character(const InternalCharacter& chi, const InternalPoint& y);

struct QuadratureOptions {
  // One interval per Euclidean coordinate; required when the space has any.
  std::vector<Interval> euclidean_bounds;
  // Node count per factor. Empty means the defaults below. Cyclic factors are
  // always summed exactly.
  std::vector<int> resolution;
  int default_torus_nodes = 256;
  int default_gauss_nodes = 64;
  // Guard against tensor products that would never finish.
  long long max_nodes = 50'000'000;
};

using Integrand = std::function<Complex(const InternalPoint&)>;

// Haar-normalized integral over the space (over the Euclidean box for
// Euclidean factors). Trapezoidal nodes on torus coordinates, Gauss-Legendre
// on Euclidean coordinates, exact normalized sums on cyclic coordinates.
Complex quadrature(const InternalSpace& space, const Integrand& integrand,
                   const QuadratureOptions& options = {});

// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  Vec nodes;
  Vec weights;
};
const GaussRule& gauss_legendre(int n);

}  // namespace apdiff
