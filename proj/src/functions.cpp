#include "apdiff/functions.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "apdiff/errors.hpp"

namespace apdiff {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string list(const Vec& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out + "]";
}

// Box window over the Euclidean coordinates, full elsewhere.
Window euclidean_box_window(const InternalSpace& space, const Vec& lo, const Vec& hi) {
  std::vector<FactorWindow> parts;
  int e = 0;
  for (const Factor& f : space.factors()) {
    if (f.kind != FactorKind::Euclidean) {
      parts.push_back(FactorWindow::full());
      continue;
    }
    std::vector<Interval> b;
    for (int j = 0; j < f.size; ++j, ++e) b.push_back({lo[e], hi[e]});
    parts.push_back(FactorWindow::box(std::move(b)));
  }
  return Window(space, std::move(parts));
}

void check_box_args(const InternalSpace& space, const Vec& center, const Vec& half_width, const char* what) {
  const int e = space.euclidean_dim();
  if (e == 0) throw StructuralError(std::string(what) + " needs a Euclidean internal factor");
  if (static_cast<int>(center.size()) != e || static_cast<int>(half_width.size()) != e) {
    throw StructuralError(std::string(what) + " center/half_width must have " + std::to_string(e) + " entries");
  }
  for (double h : half_width) {
    if (!(h > 0) || !std::isfinite(h)) throw PreconditionError(std::string(what) + " half width must be positive");
  }
}

void check_integer_freqs(const ApFunction& f, int torus_dim, const char* what) {
  if (f.domain_dim() != torus_dim) {
    throw StructuralError(std::string(what) + " must have domain dimension " + std::to_string(torus_dim));
  }
  for (const auto& comp : f.components()) {
    for (const Term& t : comp) {
      for (double v : t.freq) {
        if (v != std::round(v)) {
          throw StructuralError(std::string(what) + " frequency " + fmt(v) +
                                " is not an integer, so it is not a function on the torus");
        }
      }
    }
  }
}

}  // namespace

InternalPoint project_leading(const InternalSpace& smaller, const InternalPoint& y) {
  if (y.space() == smaller) return y;
  const Vec& c = y.coords();
  if (static_cast<int>(c.size()) < smaller.coordinate_count()) {
    throw StructuralError("point does not extend the requested space");
  }
  return InternalPoint(smaller, Vec(c.begin(), c.begin() + smaller.coordinate_count()));
}

WeightFunction::WeightFunction(InternalSpace space, Fn fn, Window support, double sup_abs, std::string description)
    : space_(std::move(space)),
      fn_(std::move(fn)),
      support_(std::move(support)),
      sup_(sup_abs),
      desc_(std::move(description)) {
  if (!(support_.space() == space_)) throw StructuralError("weight support lives in a different space");
}

WeightFunction WeightFunction::constant(const InternalSpace& space, Complex c) {
  if (!space.is_compact()) {
    throw PreconditionError("constant weight on a Euclidean internal factor is not compactly supported");
  }
  return WeightFunction(space, [c](const InternalPoint&) { return c; }, Window::full(space), std::abs(c),
                        "const(" + fmt(c.real()) + "," + fmt(c.imag()) + ")");
}

WeightFunction WeightFunction::tent(const InternalSpace& space, Vec center, Vec half_width) {
  check_box_args(space, center, half_width, "tent");
  Vec lo(center.size()), hi(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    lo[i] = center[i] - half_width[i];
    hi[i] = center[i] + half_width[i];
  }
  const std::string desc = "tent(" + list(center) + "," + list(half_width) + ")";
  auto fn = [center, half_width](const InternalPoint& y) {
    const Vec e = y.euclidean_part();
    double v = 1.0;
    for (std::size_t i = 0; i < e.size(); ++i) v *= std::max(0.0, 1.0 - std::abs(e[i] - center[i]) / half_width[i]);
    return Complex(v);
  };
  return WeightFunction(space, fn, euclidean_box_window(space, lo, hi), 1.0, desc);
}

WeightFunction WeightFunction::bump(const InternalSpace& space, Vec center, Vec half_width) {
  check_box_args(space, center, half_width, "bump");
  Vec lo(center.size()), hi(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    lo[i] = center[i] - half_width[i];
    hi[i] = center[i] + half_width[i];
  }
  const std::string desc = "bump(" + list(center) + "," + list(half_width) + ")";
  auto fn = [center, half_width](const InternalPoint& y) {
    const Vec e = y.euclidean_part();
    double v = 1.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double s = (e[i] - center[i]) / half_width[i];
      if (std::abs(s) >= 1.0) return Complex(0.0);
      v *= 0.5 * (1.0 + std::cos(std::numbers::pi * s));
    }
    return Complex(v);
  };
  return WeightFunction(space, fn, euclidean_box_window(space, lo, hi), 1.0, desc);
}

WeightFunction WeightFunction::indicator(const Window& window) {
  window.euclidean_bounds();  // throws when unbounded
  auto fn = [window](const InternalPoint& y) { return Complex(window.contains(y) ? 1.0 : 0.0); };
  return WeightFunction(window.space(), fn, window, 1.0, "indicator(" + window.describe() + ")");
}

WeightFunction WeightFunction::torus_trig(const InternalSpace& space, const ApFunction& f) {
  if (!space.is_compact()) throw PreconditionError("trigonometric weight needs a compact internal space");
  if (f.out_dim() != 1) throw StructuralError("weight must be scalar");
  check_integer_freqs(f, space.torus_dim(), "torus weight");
  auto fn = [f](const InternalPoint& y) { return f.value(y.torus_part()); };
  return WeightFunction(space, fn, Window::full(space), f.sup_bound(), "torus_trig(" + f.describe() + ")");
}

WeightFunction WeightFunction::cyclic_table(const InternalSpace& space,
                                            std::map<std::vector<long long>, Complex> table) {
  if (!space.is_compact()) throw PreconditionError("cyclic table weight needs a compact internal space");
  std::map<std::vector<long long>, Complex> reduced;
  double sup = 0.0;
  std::set<std::vector<long long>> tuples;
  std::string desc = "cyclic_table(";
  for (const auto& entry : table) {
    std::vector<long long> key = entry.first;
    const Complex value = entry.second;
    if (static_cast<int>(key.size()) != space.cyclic_count()) {
      throw StructuralError("cyclic table key has wrong length");
    }
    int j = 0;
    for (int c = 0; c < space.coordinate_count(); ++c) {
      if (space.kind_of_coordinate(c) != FactorKind::Cyclic) continue;
      const long long q = space.order_of_coordinate(c);
      key[j] = ((key[j] % q) + q) % q;
      ++j;
    }
    reduced[key] += value;
  }
  for (const auto& [key, value] : reduced) {
    sup = std::max(sup, std::abs(value));
    if (value != Complex(0.0)) tuples.insert(key);
    desc += "{";
    for (long long v : key) desc += std::to_string(v) + ",";
    desc += ":" + fmt(value.real()) + "," + fmt(value.imag()) + "}";
  }
  desc += ")";
  std::vector<FactorWindow> parts(space.factors().size(), FactorWindow::full());
  Window support = tuples.empty() ? Window::full(space) : Window(space, parts, tuples);
  auto fn = [reduced](const InternalPoint& y) {
    auto it = reduced.find(y.cyclic_part());
    return it == reduced.end() ? Complex(0.0) : it->second;
  };
  return WeightFunction(space, fn, support, sup, desc);
}

WeightFunction WeightFunction::product(const WeightFunction& a, const WeightFunction& b) {
  if (!(a.space() == b.space())) throw StructuralError("product of weights on different spaces");
  auto fn = [a, b](const InternalPoint& y) {
    const Complex va = a(y);
    return va == Complex(0.0) ? va : va * b(y);
  };
  // support of a is the tighter bound when b is full; keep a's unless a is unbounded
  const bool a_bounded = a.space().euclidean_dim() == 0 || [&] {
    try {
      a.support().euclidean_bounds();
      return true;
    } catch (const PreconditionError&) {
      return false;
    }
  }();
  return WeightFunction(a.space(), fn, a_bounded ? a.support() : b.support(), a.sup_abs() * b.sup_abs(),
                        "product(" + a.describe() + "," + b.describe() + ")");
}

WeightFunction WeightFunction::lifted_to(const InternalSpace& larger) const {
  if (larger == space_) return *this;
  InternalSpace small = space_;
  Fn inner = fn_;
  auto fn = [small, inner](const InternalPoint& y) { return inner(project_leading(small, y)); };
  return WeightFunction(larger, fn, support_.embedded_in(larger), sup_, desc_);
}

DeformationMap::DeformationMap(InternalSpace space, int phys_dim, Fn fn, double sup_norm, std::string description)
    : space_(std::move(space)), phys_dim_(phys_dim), fn_(std::move(fn)), sup_(sup_norm), desc_(std::move(description)) {}

DeformationMap DeformationMap::zero(const InternalSpace& space, int phys_dim) {
  DeformationMap p(space, phys_dim, [phys_dim](const InternalPoint&) { return Vec(phys_dim, 0.0); }, 0.0, "zero");
  p.zero_ = true;
  return p;
}

DeformationMap DeformationMap::torus_trig(const InternalSpace& space, const ApFunction& p) {
  if (!p.real_output()) throw StructuralError("deformation must be real vector valued");
  check_integer_freqs(p, space.torus_dim(), "torus deformation");
  auto fn = [p](const InternalPoint& y) { return p.vector_value(y.torus_part()); };
  return DeformationMap(space, p.out_dim(), fn, p.sup_bound(), "torus_trig(" + p.describe() + ")");
}

DeformationMap DeformationMap::linear(const InternalSpace& space, const Eigen::MatrixXd& a,
                                      const std::vector<Interval>& bounds) {
  if (a.cols() != space.euclidean_dim() || a.cols() == 0) {
    throw StructuralError("linear deformation needs one column per Euclidean internal coordinate");
  }
  if (static_cast<int>(bounds.size()) != space.euclidean_dim()) {
    throw StructuralError("linear deformation bounds must cover every Euclidean coordinate");
  }
  // sup of |A y| over the box is attained at a corner
  const int e = static_cast<int>(a.cols());
  double sup = 0.0;
  for (long long mask = 0; mask < (1LL << e); ++mask) {
    Eigen::VectorXd y(e);
    for (int j = 0; j < e; ++j) y(j) = (mask >> j) & 1 ? bounds[j].hi : bounds[j].lo;
    sup = std::max(sup, (a * y).norm());
  }
  std::string desc = "linear([";
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) desc += fmt(a(r, c)) + ",";
    desc += ";";
  }
  desc += "])";
  auto fn = [a](const InternalPoint& y) {
    const Vec e = y.euclidean_part();
    const Eigen::VectorXd out = a * Eigen::Map<const Eigen::VectorXd>(e.data(), static_cast<long>(e.size()));
    return Vec(out.data(), out.data() + out.size());
  };
  return DeformationMap(space, static_cast<int>(a.rows()), fn, sup, desc);
}

DeformationMap DeformationMap::lifted_to(const InternalSpace& larger) const {
  if (larger == space_) return *this;
  InternalSpace small = space_;
  Fn inner = fn_;
  DeformationMap p(larger, phys_dim_, [small, inner](const InternalPoint& y) { return inner(project_leading(small, y)); },
                   sup_, desc_);
  p.zero_ = zero_;
  return p;
}

}  // namespace apdiff
