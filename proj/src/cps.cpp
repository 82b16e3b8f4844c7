#include "apdiff/cps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "apdiff/errors.hpp"
#include "apdiff/rational.hpp"

namespace apdiff {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Euclidean internal coordinates of a point, in flat order.
void append_euclidean(const InternalSpace& space, const InternalPoint& p, Vec& out) {
  for (int c = 0; c < space.coordinate_count(); ++c) {
    if (space.kind_of_coordinate(c) == FactorKind::Euclidean) out.push_back(p[c]);
  }
}

}  // namespace

CutProjectScheme::CutProjectScheme(int phys_dim, InternalSpace internal,
                                   std::vector<LatticeGenerator> generators, SchemeOptions options)
    : phys_dim_(phys_dim), internal_(std::move(internal)), generators_(std::move(generators)) {
  if (phys_dim_ < 1) throw StructuralError("physical dimension must be positive");
  const int n = phys_dim_ + internal_.euclidean_dim();
  if (rank() != n) {
    throw StructuralError("scheme needs " + std::to_string(n) + " generators (d + Euclidean internal dim), got " +
                          std::to_string(rank()));
  }
  embedding_.resize(n, n);
  for (int i = 0; i < rank(); ++i) {
    const LatticeGenerator& g = generators_[i];
    if (static_cast<int>(g.phys.size()) != phys_dim_) {
      throw StructuralError("generator " + std::to_string(i) + " has wrong physical dimension");
    }
    if (!(g.internal.space() == internal_)) {
      throw StructuralError("generator " + std::to_string(i) + " lives in a different internal space");
    }
    Vec col = g.phys;
    append_euclidean(internal_, g.internal, col);
    for (int r = 0; r < n; ++r) embedding_(r, i) = col[r];
  }
  const double det = embedding_.determinant();
  if (!(std::abs(det) > 1e-12)) {
    throw StructuralError("generators do not span a lattice (determinant " + format_double(det) + ")");
  }
  density_ = 1.0 / std::abs(det);

  // projection to physical space must be one-to-one on the lattice
  if (rank() > phys_dim_) {
    int horizon = options.injectivity_horizon;
    while (horizon > 1 && std::pow(2.0 * horizon + 1, rank()) > 2e6) --horizon;
    KLabel k(rank(), -horizon);
    for (;;) {
      bool nonzero = false;
      double norm = 0.0;
      for (int j = 0; j < phys_dim_; ++j) {
        double s = 0.0;
        for (int i = 0; i < rank(); ++i) s += static_cast<double>(k[i]) * generators_[i].phys[j];
        norm = std::max(norm, std::abs(s));
      }
      for (long long v : k) nonzero |= v != 0;
      if (nonzero && norm <= options.injectivity_tol) {
        std::string label;
        for (long long v : k) label += (label.empty() ? "" : ",") + std::to_string(v);
        throw StructuralError("projection to physical space is not one-to-one: k = (" + label +
                              ") projects to 0");
      }
      int i = rank() - 1;
      while (i >= 0 && k[i] == horizon) k[i--] = -horizon;
      if (i < 0) break;
      ++k[i];
    }
  }
}

std::string CutProjectScheme::describe() const {
  std::string out = "cps(d=" + std::to_string(phys_dim_) + ";H=" + internal_.describe() + ";gens=";
  for (const auto& g : generators_) {
    out += "[";
    for (double v : g.phys) out += format_double(v) + ",";
    out += "|";
    for (double v : g.internal.coords()) out += format_double(v) + ",";
    out += "]";
  }
  return out + ")";
}

StarImage star(const CutProjectScheme& scheme, std::span<const long long> k) {
  if (static_cast<int>(k.size()) != scheme.rank()) {
    throw StructuralError("label length " + std::to_string(k.size()) + " != scheme rank " +
                          std::to_string(scheme.rank()));
  }
  const InternalSpace& space = scheme.internal();
  Vec phys(scheme.phys_dim(), 0.0);
  Vec internal(space.coordinate_count(), 0.0);
  for (int c = 0; c < space.coordinate_count(); ++c) {
    switch (space.kind_of_coordinate(c)) {
      case FactorKind::Euclidean: {
        double s = 0.0;
        for (std::size_t i = 0; i < k.size(); ++i) {
          s += static_cast<double>(k[i]) * scheme.generators()[i].internal[c];
        }
        internal[c] = s;
        break;
      }
      case FactorKind::Torus: {
        long double s = 0.0L;
        for (std::size_t i = 0; i < k.size(); ++i) {
          const long double term = static_cast<long double>(k[i]) *
                                   static_cast<long double>(scheme.generators()[i].internal[c]);
          s += term - std::floor(term);
        }
        internal[c] = static_cast<double>(s - std::floor(s));
        break;
      }
      case FactorKind::Cyclic: {
        const long long q = space.order_of_coordinate(c);
        long long s = 0;
        for (std::size_t i = 0; i < k.size(); ++i) {
          const long long r = static_cast<long long>(scheme.generators()[i].internal[c]);
          s = (s + ((k[i] % q) * r) % q) % q;
        }
        internal[c] = static_cast<double>((s + q) % q);
        break;
      }
    }
  }
  for (std::size_t i = 0; i < k.size(); ++i) {
    const Vec& v = scheme.generators()[i].phys;
    for (int j = 0; j < scheme.phys_dim(); ++j) phys[j] += static_cast<double>(k[i]) * v[j];
  }
  return {std::move(phys), space.point(std::move(internal))};
}

Window::Window(InternalSpace space, std::vector<FactorWindow> parts,
               std::set<std::vector<long long>> cyclic_tuples)
    : space_(std::move(space)), parts_(std::move(parts)), cyclic_tuples_(std::move(cyclic_tuples)) {
  if (parts_.size() != space_.factors().size()) {
    throw StructuralError("window needs one part per internal factor");
  }
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const Factor& f = space_.factors()[i];
    FactorWindow& part = parts_[i];
    switch (part.kind) {
      case FactorWindow::Kind::Full:
        break;
      case FactorWindow::Kind::Box:
        if (f.kind == FactorKind::Cyclic) throw StructuralError("box window on a cyclic factor");
        if (static_cast<int>(part.bounds.size()) != f.size) {
          throw StructuralError("box window needs one interval per coordinate of " + to_string(f));
        }
        for (const Interval& iv : part.bounds) {
          if (!(iv.hi > iv.lo)) throw StructuralError("window intervals need nonempty interior");
        }
        break;
      case FactorWindow::Kind::Residues:
        if (f.kind != FactorKind::Cyclic) throw StructuralError("residue window on a non-cyclic factor");
        for (long long& r : part.residues) r = ((r % f.size) + f.size) % f.size;
        std::sort(part.residues.begin(), part.residues.end());
        part.residues.erase(std::unique(part.residues.begin(), part.residues.end()), part.residues.end());
        break;
    }
  }
  for (const auto& t : cyclic_tuples_) {
    if (static_cast<int>(t.size()) != space_.cyclic_count()) {
      throw StructuralError("cyclic tuple length does not match the number of cyclic factors");
    }
  }
}

Window Window::full(const InternalSpace& space) {
  return Window(space, std::vector<FactorWindow>(space.factors().size()));
}

bool Window::contains(const InternalPoint& y) const {
  if (!(y.space() == space_)) throw StructuralError("window and point live in different spaces");
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const FactorWindow& part = parts_[i];
    const Factor& f = space_.factors()[i];
    const int off = space_.offset(i);
    switch (part.kind) {
      case FactorWindow::Kind::Full:
        break;
      case FactorWindow::Kind::Box:
        for (int j = 0; j < f.size; ++j) {
          const Interval& iv = part.bounds[j];
          const double v = y[off + j];
          if (f.kind == FactorKind::Euclidean) {
            if (v < iv.lo || v >= iv.hi) return false;
          } else {
            if (iv.length() >= 1.0) continue;
            double rel = v - iv.lo;
            rel -= std::floor(rel);
            if (rel >= iv.length()) return false;
          }
        }
        break;
      case FactorWindow::Kind::Residues:
        if (!std::binary_search(part.residues.begin(), part.residues.end(),
                                static_cast<long long>(y[off]))) {
          return false;
        }
        break;
    }
  }
  if (!cyclic_tuples_.empty() && !cyclic_tuples_.count(y.cyclic_part())) return false;
  return true;
}

std::vector<Interval> Window::euclidean_bounds() const {
  std::vector<Interval> out;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const Factor& f = space_.factors()[i];
    if (f.kind != FactorKind::Euclidean) continue;
    if (parts_[i].kind != FactorWindow::Kind::Box) {
      throw PreconditionError("window is not relatively compact on factor " + to_string(f));
    }
    out.insert(out.end(), parts_[i].bounds.begin(), parts_[i].bounds.end());
  }
  return out;
}

Window Window::embedded_in(const InternalSpace& larger) const {
  const auto& mine = space_.factors();
  const auto& theirs = larger.factors();
  if (theirs.size() < mine.size() || !std::equal(mine.begin(), mine.end(), theirs.begin())) {
    throw StructuralError("window space " + space_.describe() + " is not a leading factor of " +
                          larger.describe());
  }
  std::vector<FactorWindow> parts = parts_;
  parts.resize(theirs.size(), FactorWindow::full());
  std::set<std::vector<long long>> tuples;
  if (!cyclic_tuples_.empty()) {
    // extra cyclic factors are unconstrained: enumerate them
    std::vector<int> extra_orders;
    for (std::size_t i = mine.size(); i < theirs.size(); ++i) {
      if (theirs[i].kind == FactorKind::Cyclic) extra_orders.push_back(theirs[i].size);
    }
    for (const auto& t : cyclic_tuples_) {
      std::vector<long long> cur = t;
      cur.resize(t.size() + extra_orders.size(), 0);
      for (;;) {
        tuples.insert(cur);
        bool advanced = false;
        for (std::size_t j = extra_orders.size(); j-- > 0;) {
          if (++cur[t.size() + j] < extra_orders[j]) {
            advanced = true;
            break;
          }
          cur[t.size() + j] = 0;
        }
        if (!advanced) break;
      }
    }
  }
  return Window(larger, std::move(parts), std::move(tuples));
}

bool Window::subset_of(const Window& other) const {
  if (!(space_ == other.space_)) throw StructuralError("window comparison across spaces");
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const FactorWindow& a = parts_[i];
    const FactorWindow& b = other.parts_[i];
    const Factor& f = space_.factors()[i];
    if (b.kind == FactorWindow::Kind::Full) continue;
    if (a.kind == FactorWindow::Kind::Full) {
      if (b.kind == FactorWindow::Kind::Box && f.kind == FactorKind::Torus) {
        for (const auto& iv : b.bounds) {
          if (iv.length() < 1.0) return false;
        }
        continue;
      }
      if (b.kind == FactorWindow::Kind::Residues) {
        if (static_cast<int>(b.residues.size()) != f.size) return false;
        continue;
      }
      return false;
    }
    if (a.kind == FactorWindow::Kind::Box) {
      for (int j = 0; j < f.size; ++j) {
        const Interval& x = a.bounds[j];
        const Interval& y = b.bounds[j];
        if (f.kind == FactorKind::Euclidean) {
          if (x.lo < y.lo || x.hi > y.hi) return false;
        } else {
          if (y.length() >= 1.0) continue;
          if (x.length() > y.length()) return false;
          double rel = x.lo - y.lo;
          rel -= std::floor(rel);
          if (rel + x.length() > y.length()) return false;
        }
      }
    } else {
      for (long long r : a.residues) {
        if (!std::binary_search(b.residues.begin(), b.residues.end(), r)) return false;
      }
    }
  }
  if (!other.cyclic_tuples_.empty()) {
    if (cyclic_tuples_.empty()) return false;
    for (const auto& t : cyclic_tuples_) {
      if (!other.cyclic_tuples_.count(t)) return false;
    }
  }
  return true;
}

std::string Window::describe() const {
  std::string out = "window(";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const FactorWindow& p = parts_[i];
    if (i) out += ";";
    switch (p.kind) {
      case FactorWindow::Kind::Full:
        out += "full";
        break;
      case FactorWindow::Kind::Box:
        out += "box";
        for (const auto& iv : p.bounds) out += "[" + format_double(iv.lo) + "," + format_double(iv.hi) + ")";
        break;
      case FactorWindow::Kind::Residues:
        out += "res{";
        for (long long r : p.residues) out += std::to_string(r) + ",";
        out += "}";
        break;
    }
  }
  if (!cyclic_tuples_.empty()) {
    out += ";tuples{";
    for (const auto& t : cyclic_tuples_) {
      out += "(";
      for (long long v : t) out += std::to_string(v) + ",";
      out += ")";
    }
    out += "}";
  }
  return out + ")";
}

std::vector<ModelPoint> enumerate_model_set(const CutProjectScheme& scheme, const Window& window,
                                            const Box& region) {
  require_dim(region, scheme.phys_dim(), "enumerate_model_set");
  if (!region.bounded()) throw PreconditionError("enumeration region must be bounded");
  if (!(window.space() == scheme.internal())) {
    throw StructuralError("window space does not match the scheme's internal space");
  }
  std::vector<ModelPoint> out;
  if (region.empty()) return out;

  // constraint box in R^(d+e)
  const int n = scheme.rank();
  Vec lo = region.lo, hi = region.hi;
  for (const Interval& iv : window.euclidean_bounds()) {
    lo.push_back(iv.lo);
    hi.push_back(iv.hi);
  }
  const Eigen::MatrixXd& a = scheme.embedding();
  const Eigen::MatrixXd inv = a.inverse();

  // bounding box of inv * box, by interval arithmetic
  std::vector<long long> kmin(n), kmax(n);
  for (int j = 0; j < n; ++j) {
    double mn = 0.0, mx = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = inv(j, i) * lo[i], y = inv(j, i) * hi[i];
      mn += std::min(x, y);
      mx += std::max(x, y);
    }
    kmin[j] = static_cast<long long>(std::floor(mn)) - 1;
    kmax[j] = static_cast<long long>(std::ceil(mx)) + 1;
  }

  const double slack = 1e-9 * (1.0 + std::abs(a.maxCoeff()) + std::abs(a.minCoeff()));
  KLabel k(kmin);
  const int last = n - 1;
  for (;;) {
    // exact range for the last coordinate given the others
    double lo_last = static_cast<double>(kmin[last]);
    double hi_last = static_cast<double>(kmax[last]);
    for (int i = 0; i < n; ++i) {
      double partial = 0.0;
      for (int j = 0; j < last; ++j) partial += a(i, j) * static_cast<double>(k[j]);
      const double coef = a(i, last);
      if (std::abs(coef) < 1e-300) {
        if (partial < lo[i] - slack || partial > hi[i] + slack) {
          hi_last = lo_last - 1;
        }
        continue;
      }
      double t0 = (lo[i] - slack - partial) / coef, t1 = (hi[i] + slack - partial) / coef;
      if (t0 > t1) std::swap(t0, t1);
      lo_last = std::max(lo_last, t0);
      hi_last = std::min(hi_last, t1);
    }
    for (long long v = static_cast<long long>(std::ceil(lo_last));
         static_cast<double>(v) <= hi_last; ++v) {
      k[last] = v;
      StarImage img = star(scheme, k);
      if (region.contains(img.phys) && window.contains(img.internal)) {
        out.push_back({k, std::move(img.phys), std::move(img.internal)});
      }
    }
    int j = last - 1;
    while (j >= 0 && k[j] == kmax[j]) {
      k[j] = kmin[j];
      --j;
    }
    if (j < 0) break;
    ++k[j];
  }
  std::sort(out.begin(), out.end(), [](const ModelPoint& x, const ModelPoint& y) { return x.k < y.k; });
  return out;
}

namespace {

struct LabelLayout {
  int r = 0;
  std::vector<int> torus_coords;
  std::vector<int> cyclic_coords;
  std::vector<int> cyclic_orders;
  std::vector<int> euclid_coords;
};

LabelLayout layout_of(const CutProjectScheme& scheme) {
  LabelLayout l;
  l.r = scheme.rank();
  const InternalSpace& s = scheme.internal();
  for (int c = 0; c < s.coordinate_count(); ++c) {
    switch (s.kind_of_coordinate(c)) {
      case FactorKind::Euclidean: l.euclid_coords.push_back(c); break;
      case FactorKind::Torus: l.torus_coords.push_back(c); break;
      case FactorKind::Cyclic:
        l.cyclic_coords.push_back(c);
        l.cyclic_orders.push_back(s.order_of_coordinate(c));
        break;
    }
  }
  return l;
}

}  // namespace

DualCharacter dual_character(const CutProjectScheme& scheme, const KLabel& label) {
  const LabelLayout lay = layout_of(scheme);
  const std::size_t expected = lay.r + lay.torus_coords.size() + lay.cyclic_coords.size();
  if (label.size() != expected) {
    throw StructuralError("dual label has length " + std::to_string(label.size()) + ", expected " +
                          std::to_string(expected));
  }
  const int d = scheme.phys_dim();
  Eigen::VectorXd rhs(lay.r);
  for (int i = 0; i < lay.r; ++i) {
    const InternalPoint& s = scheme.generators()[i].internal;
    long double v = static_cast<long double>(label[i]);
    for (std::size_t t = 0; t < lay.torus_coords.size(); ++t) {
      v -= static_cast<long double>(label[lay.r + t]) * s[lay.torus_coords[t]];
    }
    for (std::size_t j = 0; j < lay.cyclic_coords.size(); ++j) {
      const long long q = lay.cyclic_orders[j];
      const long long c = label[lay.r + lay.torus_coords.size() + j];
      const long long prod = (((c % q) + q) % q) * static_cast<long long>(s[lay.cyclic_coords[j]]) % q;
      v -= static_cast<long double>(prod) / q;
    }
    rhs(i) = static_cast<double>(v);
  }
  const Eigen::VectorXd z = scheme.embedding().transpose().fullPivLu().solve(rhs);

  Vec freq(z.data(), z.data() + d);
  Vec labels(scheme.internal().coordinate_count(), 0.0);
  for (std::size_t e = 0; e < lay.euclid_coords.size(); ++e) labels[lay.euclid_coords[e]] = z(d + e);
  for (std::size_t t = 0; t < lay.torus_coords.size(); ++t) {
    labels[lay.torus_coords[t]] = static_cast<double>(label[lay.r + t]);
  }
  KLabel canonical = label;
  for (std::size_t j = 0; j < lay.cyclic_coords.size(); ++j) {
    const long long q = lay.cyclic_orders[j];
    long long& c = canonical[lay.r + lay.torus_coords.size() + j];
    c = ((c % q) + q) % q;
    labels[lay.cyclic_coords[j]] = static_cast<double>(c);
  }
  return {std::move(canonical), std::move(freq), scheme.internal().character(std::move(labels))};
}

double pairing_residual(const CutProjectScheme& scheme, const DualCharacter& chi) {
  double worst = 0.0;
  for (const LatticeGenerator& g : scheme.generators()) {
    double turns = character_phase(chi.internal, g.internal);
    for (int j = 0; j < scheme.phys_dim(); ++j) turns += chi.freq[j] * g.phys[j];
    const double frac = turns - std::round(turns);
    worst = std::max(worst, std::abs(std::polar(1.0, kTwoPi * frac) - Complex(1.0)));
  }
  return worst;
}

KLabel negated_label(const CutProjectScheme& scheme, const KLabel& label) {
  const LabelLayout lay = layout_of(scheme);
  KLabel out(label.size());
  for (std::size_t i = 0; i < label.size(); ++i) out[i] = -label[i];
  const std::size_t base = lay.r + lay.torus_coords.size();
  for (std::size_t j = 0; j < lay.cyclic_coords.size(); ++j) {
    const long long q = lay.cyclic_orders[j];
    out[base + j] = ((out[base + j] % q) + q) % q;
  }
  return out;
}

DualCharacterSet dual_characters(const CutProjectScheme& scheme, double freq_cutoff, int label_bound) {
  if (!(freq_cutoff > 0) || label_bound < 1) {
    throw PreconditionError("frequency cutoff and label bound must be positive");
  }
  const LabelLayout lay = layout_of(scheme);
  const std::size_t free_count = lay.r + lay.torus_coords.size();
  double combos = std::pow(2.0 * label_bound + 1, static_cast<double>(free_count));
  for (int q : lay.cyclic_orders) combos *= q;
  if (combos > 5e7) {
    throw PreconditionError("dual character search box too large (" + std::to_string(combos) + " labels)");
  }

  DualCharacterSet result;
  result.freq_cutoff = freq_cutoff;
  result.label_bound = label_bound;
  result.completeness_note = "labels with |label|_inf > " + std::to_string(label_bound) +
                             " were not searched; characters with |freq| <= " +
                             format_double(freq_cutoff) + " may be missing";

  KLabel label(free_count + lay.cyclic_coords.size());
  for (std::size_t i = 0; i < free_count; ++i) label[i] = -label_bound;
  for (std::size_t j = 0; j < lay.cyclic_coords.size(); ++j) label[free_count + j] = 0;
  for (;;) {
    DualCharacter chi = dual_character(scheme, label);
    double norm2 = 0.0;
    for (double v : chi.freq) norm2 += v * v;
    if (std::sqrt(norm2) <= freq_cutoff * (1 + 1e-14)) {
      const double residual = pairing_residual(scheme, chi);
      if (residual > 1e-10) {
        throw NumericalInvariantError("dual pairing residual " + format_double(residual) +
                                      " exceeds 1e-10");
      }
      result.characters.push_back(std::move(chi));
    }
    int i = static_cast<int>(label.size()) - 1;
    for (; i >= 0; --i) {
      const bool cyclic = i >= static_cast<int>(free_count);
      const long long top = cyclic ? lay.cyclic_orders[i - free_count] - 1 : label_bound;
      const long long bottom = cyclic ? 0 : -label_bound;
      if (label[i] < top) {
        ++label[i];
        break;
      }
      label[i] = bottom;
    }
    if (i < 0) break;
  }
  std::sort(result.characters.begin(), result.characters.end(),
            [](const DualCharacter& a, const DualCharacter& b) { return a.label < b.label; });
  return result;
}

CutProjectScheme extend_scheme(const CutProjectScheme& scheme, const std::vector<Vec>& mod_freqs) {
  if (mod_freqs.empty()) return scheme;
  for (const Vec& w : mod_freqs) {
    if (static_cast<int>(w.size()) != scheme.phys_dim()) {
      throw StructuralError("modulation frequency row has wrong dimension");
    }
  }
  const int s = static_cast<int>(mod_freqs.size());
  const InternalSpace extended = scheme.internal().product(InternalSpace({Factor::torus(s)}));
  std::vector<LatticeGenerator> gens;
  for (const LatticeGenerator& g : scheme.generators()) {
    Vec coords = g.internal.coords();
    for (const Vec& w : mod_freqs) {
      long double dot = 0.0L;
      for (int j = 0; j < scheme.phys_dim(); ++j) dot += static_cast<long double>(w[j]) * g.phys[j];
      coords.push_back(static_cast<double>(dot - std::floor(dot)));
    }
    gens.push_back({g.phys, extended.point(std::move(coords))});
  }
  return CutProjectScheme(scheme.phys_dim(), extended, std::move(gens));
}

double equidistribution_discrepancy(const CutProjectScheme& scheme, int coord, long long samples) {
  if (coord < 0 || coord >= scheme.internal().coordinate_count() ||
      scheme.internal().kind_of_coordinate(coord) != FactorKind::Torus) {
    throw PreconditionError("discrepancy needs a torus coordinate");
  }
  const int r = scheme.rank();
  const long long side = std::max<long long>(
      1, static_cast<long long>(std::floor(std::pow(static_cast<double>(samples), 1.0 / r))));
  Vec xs;
  KLabel k(r, 0);
  for (;;) {
    xs.push_back(star(scheme, k).internal[coord]);
    int i = r - 1;
    while (i >= 0 && k[i] == side - 1) k[i--] = 0;
    if (i < 0) break;
    ++k[i];
  }
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    worst = std::max({worst, (i + 1) / n - xs[i], xs[i] - i / n});
  }
  return worst;
}

IdealCrystalScheme ideal_crystal_scheme(const Eigen::MatrixXd& gamma_basis, const std::vector<Vec>& offsets) {
  const int d = static_cast<int>(gamma_basis.rows());
  if (gamma_basis.cols() != d || d < 1) throw StructuralError("lattice basis must be square");
  if (offsets.empty()) throw PreconditionError("ideal crystal needs at least one offset");
  const Eigen::MatrixXd inv = gamma_basis.inverse();

  std::vector<std::vector<Rational>> coords;
  std::vector<long long> den(d, 1);
  for (std::size_t o = 0; o < offsets.size(); ++o) {
    if (static_cast<int>(offsets[o].size()) != d) throw StructuralError("offset has wrong dimension");
    const Eigen::VectorXd c = inv * Eigen::Map<const Eigen::VectorXd>(offsets[o].data(), d);
    std::vector<Rational> rc;
    for (int i = 0; i < d; ++i) {
      auto q = rationalize(c(i), 1'000'000, 1e-11);
      if (!q) {
        std::string text;
        for (double v : offsets[o]) text += (text.empty() ? "" : ", ") + format_double(v);
        throw UnsupportedInputError("offset (" + text + ") is incommensurate with the lattice: coordinate " +
                                    format_double(c(i)) + " is not rational");
      }
      den[i] = lcm_checked(den[i], q->denominator());
      rc.push_back(*q);
    }
    coords.push_back(std::move(rc));
  }

  std::vector<Factor> factors;
  for (int i = 0; i < d; ++i) factors.push_back(Factor::cyclic(static_cast<int>(den[i])));
  const InternalSpace space(factors);

  std::vector<LatticeGenerator> gens;
  for (int i = 0; i < d; ++i) {
    Vec phys(d);
    for (int j = 0; j < d; ++j) phys[j] = gamma_basis(j, i) / static_cast<double>(den[i]);
    Vec internal(d, 0.0);
    internal[i] = 1.0;
    gens.push_back({std::move(phys), space.point(std::move(internal))});
  }

  std::set<std::vector<long long>> tuples;
  for (const auto& rc : coords) {
    std::vector<long long> t(d);
    for (int i = 0; i < d; ++i) {
      const Rational scaled = rc[i] * Rational(den[i]);
      t[i] = ((scaled.numerator() % den[i]) + den[i]) % den[i];
    }
    tuples.insert(std::move(t));
  }
  std::vector<FactorWindow> parts;
  if (d == 1) {
    std::vector<long long> res;
    for (const auto& t : tuples) res.push_back(t[0]);
    parts.push_back(FactorWindow::residue_set(std::move(res)));
    tuples.clear();
  } else {
    parts.assign(d, FactorWindow::full());
  }
  CutProjectScheme scheme(d, space, std::move(gens));
  Window window(space, std::move(parts), std::move(tuples));
  return {std::move(scheme), std::move(window), std::move(den)};
}

bool structurally_equal(const CutProjectScheme& a, const CutProjectScheme& b, double tol) {
  if (a.phys_dim() != b.phys_dim() || a.rank() != b.rank()) return false;
  auto informative = [](const CutProjectScheme& s) {
    std::vector<int> keep;
    const InternalSpace& sp = s.internal();
    for (std::size_t f = 0; f < sp.factors().size(); ++f) {
      const Factor& fac = sp.factors()[f];
      if (fac.kind == FactorKind::Cyclic && fac.size == 1) continue;
      for (int j = 0; j < fac.coordinate_count(); ++j) keep.push_back(sp.offset(f) + j);
    }
    return keep;
  };
  if (!(a.internal().without_trivial_factors() == b.internal().without_trivial_factors())) return false;
  const auto ka = informative(a), kb = informative(b);
  for (int i = 0; i < a.rank(); ++i) {
    const auto& ga = a.generators()[i];
    const auto& gb = b.generators()[i];
    for (int j = 0; j < a.phys_dim(); ++j) {
      if (std::abs(ga.phys[j] - gb.phys[j]) > tol) return false;
    }
    for (std::size_t c = 0; c < ka.size(); ++c) {
      double diff = ga.internal[ka[c]] - gb.internal[kb[c]];
      if (a.internal().kind_of_coordinate(ka[c]) == FactorKind::Torus) diff -= std::round(diff);
      if (std::abs(diff) > tol) return false;
    }
  }
  return true;
}

double golden_mean() { return (1.0 + std::sqrt(5.0)) / 2.0; }

double golden4() {
  const double tau = golden_mean();
  return 1.0 / (tau * tau * tau * tau);
}

CutProjectScheme sine_scheme(double alpha) {
  const InternalSpace space({Factor::torus(1)});
  return CutProjectScheme(1, space, {{Vec{1.0}, space.point(Vec{alpha})}});
}

CutProjectScheme integer_scheme() {
  const InternalSpace space({Factor::cyclic(1)});
  return CutProjectScheme(1, space, {{Vec{1.0}, space.identity()}});
}

CutProjectScheme fibonacci_scheme() {
  const double tau = golden_mean();
  const InternalSpace space({Factor::euclidean(1)});
  return CutProjectScheme(1, space,
                          {{Vec{1.0}, space.point(Vec{1.0})}, {Vec{tau}, space.point(Vec{1.0 - tau})}});
}

Window fibonacci_window() {
  const InternalSpace space({Factor::euclidean(1)});
  return Window(space, {FactorWindow::box({{-1.0, golden_mean() - 1.0}})});
}

}  // namespace apdiff
