#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "apdiff/errors.hpp"
#include "apdiff/groups.hpp"

namespace apdiff {

// Closed axis-aligned box in physical space.
struct Box {
  Vec lo;
  Vec hi;

  static Box cube(int dim, double radius) { return {Vec(dim, -radius), Vec(dim, radius)}; }
  static Box interval(double lo, double hi) { return {Vec{lo}, Vec{hi}}; }

  int dim() const { return static_cast<int>(lo.size()); }

  bool bounded() const {
    for (int i = 0; i < dim(); ++i) {
      if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) return false;
    }
    return true;
  }

  bool empty() const {
    for (int i = 0; i < dim(); ++i) {
      if (!(hi[i] >= lo[i])) return true;
    }
    return false;
  }

  double volume() const {
    if (empty()) return 0.0;
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
    return v;
  }

  bool contains(const Vec& x, double slack = 0.0) const {
    for (int i = 0; i < dim(); ++i) {
      if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
    }
    return true;
  }

  bool contains(const Box& other, double slack = 0.0) const {
    for (int i = 0; i < dim(); ++i) {
      if (other.lo[i] < lo[i] - slack || other.hi[i] > hi[i] + slack) return false;
    }
    return true;
  }

  Box expanded(double margin) const {
    Box b = *this;
    for (int i = 0; i < dim(); ++i) {
      b.lo[i] -= margin;
      b.hi[i] += margin;
    }
    return b;
  }

  // May come out empty; callers check empty().
  Box shrunk(double margin) const { return expanded(-margin); }

  bool operator==(const Box&) const = default;
};

inline std::string describe(const Box& box) {
  std::string out = "[";
  for (int i = 0; i < box.dim(); ++i) {
    if (i) out += " x ";
    out += "[" + std::to_string(box.lo[i]) + ", " + std::to_string(box.hi[i]) + "]";
  }
  return out + "]";
}

inline void require_dim(const Box& box, int dim, const char* what) {
  if (box.dim() != dim) {
    throw StructuralError(std::string(what) + ": box dimension " + std::to_string(box.dim()) +
                          " != " + std::to_string(dim));
  }
}

}  // namespace apdiff
