#pragma once

// Weight functions f: H -> C and deformation maps p: H -> R^d on an internal
// space, built from closed-form families.

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "apdiff/apfun.hpp"
#include "apdiff/cps.hpp"
#include "apdiff/groups.hpp"

namespace apdiff {

class WeightFunction {
 public:
  using Fn = std::function<Complex(const InternalPoint&)>;
  WeightFunction(InternalSpace space, Fn fn, Window support, double sup_abs, std::string description);

  Complex operator()(const InternalPoint& y) const { return fn_(y); }
  const InternalSpace& space() const { return space_; }
  // f vanishes outside this window.
  const Window& support() const { return support_; }
  double sup_abs() const { return sup_; }
  const std::string& describe() const { return desc_; }

  // Constant c; the space must be compact.
  static WeightFunction constant(const InternalSpace& space, Complex c);
  // prod_j max(0, 1 - |y_j - center_j| / half_width_j) over Euclidean coordinates.
  static WeightFunction tent(const InternalSpace& space, Vec center, Vec half_width);
  // prod_j (1 + cos(pi (y_j - center_j) / half_width_j)) / 2 inside the box.
  static WeightFunction bump(const InternalSpace& space, Vec center, Vec half_width);
  static WeightFunction indicator(const Window& window);
  // Trigonometric polynomial in the torus coordinates; frequencies must be integers.
  static WeightFunction torus_trig(const InternalSpace& space, const ApFunction& f);
  // Value per joint residue tuple of the cyclic coordinates; missing tuples are 0.
  static WeightFunction cyclic_table(const InternalSpace& space,
                                     std::map<std::vector<long long>, Complex> table);
  static WeightFunction product(const WeightFunction& a, const WeightFunction& b);

  // f composed with the projection from `larger` onto this space's leading
  // coordinates.
  WeightFunction lifted_to(const InternalSpace& larger) const;

 private:
  InternalSpace space_;
  Fn fn_;
  Window support_;
  double sup_;
  std::string desc_;
};

class DeformationMap {
 public:
  using Fn = std::function<Vec(const InternalPoint&)>;
  DeformationMap(InternalSpace space, int phys_dim, Fn fn, double sup_norm, std::string description);

  Vec operator()(const InternalPoint& y) const { return fn_(y); }
  const InternalSpace& space() const { return space_; }
  int phys_dim() const { return phys_dim_; }
  // Bound on |p| over the support of the weight it is paired with.
  double sup_norm() const { return sup_; }
  const std::string& describe() const { return desc_; }
  bool is_zero() const { return zero_; }

  static DeformationMap zero(const InternalSpace& space, int phys_dim);
  // Real vector trigonometric polynomial in the torus coordinates.
  static DeformationMap torus_trig(const InternalSpace& space, const ApFunction& p);
  // p(y) = A * (Euclidean part of y); sup taken over `bounds`.
  static DeformationMap linear(const InternalSpace& space, const Eigen::MatrixXd& a,
                               const std::vector<Interval>& bounds);

  DeformationMap lifted_to(const InternalSpace& larger) const;

 private:
  InternalSpace space_;
  int phys_dim_;
  Fn fn_;
  double sup_;
  std::string desc_;
  bool zero_ = false;
};

// Restriction of a point of `larger` to the leading coordinates of `smaller`.
InternalPoint project_leading(const InternalSpace& smaller, const InternalPoint& y);

}  // namespace apdiff
