#include "apdiff/combs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <unordered_set>

#include "apdiff/errors.hpp"
#include "apdiff/parallel.hpp"

namespace apdiff {

namespace {

double dist(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

std::uint64_t fnv1a(const std::string& text, std::uint64_t h = 1469598103934665603ULL) {
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Hash grid over points for approximate membership queries.
class PointIndex {
 public:
  PointIndex(const std::vector<Vec>& points, double tol) : tol_(tol), cell_(std::max(tol, 1e-12) * 4) {
    for (const Vec& p : points) cells_.emplace(key(p), p);
  }

  bool contains(const Vec& x) const {
    const std::vector<long long> base = key(x);
    std::vector<long long> k = base;
    const int d = static_cast<int>(x.size());
    std::vector<int> off(d, -1);
    for (;;) {
      for (int i = 0; i < d; ++i) k[i] = base[i] + off[i];
      auto range = cells_.equal_range(k);
      for (auto it = range.first; it != range.second; ++it) {
        if (dist(it->second, x) <= tol_) return true;
      }
      int i = d - 1;
      while (i >= 0 && off[i] == 1) off[i--] = -1;
      if (i < 0) return false;
      ++off[i];
    }
  }

 private:
  std::vector<long long> key(const Vec& x) const {
    std::vector<long long> k(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) k[i] = static_cast<long long>(std::floor(x[i] / cell_));
    return k;
  }

  double tol_;
  double cell_;
  std::multimap<std::vector<long long>, Vec> cells_;
};

bool lex_less(const Vec& a, const Vec& b) { return a < b; }

}  // namespace

std::string system_fingerprint_text(const std::string& text) { return hex(fnv1a(text)); }

WeightedComb::WeightedComb(int dim, std::vector<Atom> atoms, Box region, Box exhaustive, std::string fingerprint)
    : dim_(dim),
      atoms_(std::move(atoms)),
      region_(std::move(region)),
      exhaustive_(std::move(exhaustive)),
      fingerprint_(std::move(fingerprint)) {
  require_dim(region_, dim_, "comb region");
  require_dim(exhaustive_, dim_, "comb exhaustive region");
  for (const Atom& a : atoms_) {
    if (static_cast<int>(a.position.size()) != dim_) throw StructuralError("atom has wrong dimension");
    if (!region_.contains(a.position, 1e-9 * (1.0 + std::abs(a.position[0])))) {
      throw StructuralError("atom outside the comb region");
    }
  }
}

WeightedComb WeightedComb::canonical(double tol) const {
  std::vector<Atom> sorted = atoms_;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Atom& a, const Atom& b) { return a.position[0] < b.position[0]; });
  std::vector<Atom> merged;
  for (const Atom& a : sorted) {
    bool done = false;
    for (std::size_t j = merged.size(); j-- > 0;) {
      if (merged[j].position[0] < a.position[0] - tol) break;
      if (dist(merged[j].position, a.position) < tol) {
        merged[j].weight += a.weight;
        done = true;
        break;
      }
    }
    if (!done) merged.push_back({a.position, a.weight, std::nullopt});
  }
  std::sort(merged.begin(), merged.end(), [](const Atom& a, const Atom& b) { return lex_less(a.position, b.position); });
  return WeightedComb(dim_, std::move(merged), region_, exhaustive_, fingerprint_);
}

double WeightedComb::translation_bound(double side) const {
  if (!(side > 0)) throw PreconditionError("box side must be positive");
  if (atoms_.empty()) return 0.0;
  if (dim_ == 1) {
    std::vector<std::pair<double, double>> pts;
    for (const Atom& a : atoms_) pts.emplace_back(a.position[0], std::abs(a.weight));
    std::sort(pts.begin(), pts.end());
    double best = 0.0, run = 0.0;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < pts.size(); ++hi) {
      run += pts[hi].second;
      while (pts[hi].first - pts[lo].first > side) run -= pts[lo++].second;
      best = std::max(best, run);
    }
    return best;
  }
  std::map<std::vector<long long>, double> cells;
  for (const Atom& a : atoms_) {
    std::vector<long long> k(dim_);
    for (int i = 0; i < dim_; ++i) k[i] = static_cast<long long>(std::floor(a.position[i] / side));
    cells[k] += std::abs(a.weight);
  }
  // any box of this side meets at most 2^d cells
  double best = 0.0;
  for (const auto& [k, v] : cells) {
    double s = 0.0;
    for (long long mask = 0; mask < (1LL << dim_); ++mask) {
      std::vector<long long> n = k;
      for (int i = 0; i < dim_; ++i) n[i] += (mask >> i) & 1;
      auto it = cells.find(n);
      if (it != cells.end()) s += it->second;
    }
    best = std::max(best, s);
  }
  return best;
}

double WeightedComb::min_separation() const {
  const WeightedComb c = canonical();
  std::vector<Vec> pts;
  for (const Atom& a : c.atoms_) pts.push_back(a.position);
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) { return a[0] < b[0]; });
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size() && pts[j][0] - pts[i][0] < best; ++j) {
      best = std::min(best, dist(pts[i], pts[j]));
    }
  }
  return best;
}

WeightedComb WeightedComb::translated(const Vec& t) const {
  if (static_cast<int>(t.size()) != dim_) throw StructuralError("translation has wrong dimension");
  std::vector<Atom> moved = atoms_;
  for (Atom& a : moved) {
    for (int i = 0; i < dim_; ++i) a.position[i] += t[i];
  }
  Box r = region_, e = exhaustive_;
  for (int i = 0; i < dim_; ++i) {
    r.lo[i] += t[i];
    r.hi[i] += t[i];
    e.lo[i] += t[i];
    e.hi[i] += t[i];
  }
  return WeightedComb(dim_, std::move(moved), r, e, fingerprint_);
}

WeightedComb WeightedComb::restricted(const Box& box) const {
  require_dim(box, dim_, "restriction box");
  std::vector<Atom> kept;
  for (const Atom& a : atoms_) {
    if (box.contains(a.position)) kept.push_back(a);
  }
  Box r = box, e = box;
  for (int i = 0; i < dim_; ++i) {
    r.lo[i] = std::max(r.lo[i], region_.lo[i]);
    r.hi[i] = std::min(r.hi[i], region_.hi[i]);
    e.lo[i] = std::max(e.lo[i], exhaustive_.lo[i]);
    e.hi[i] = std::min(e.hi[i], exhaustive_.hi[i]);
  }
  return WeightedComb(dim_, std::move(kept), r, e, fingerprint_);
}

WeightedComb WeightedComb::with_fingerprint(std::string fingerprint) const {
  WeightedComb c = *this;
  c.fingerprint_ = std::move(fingerprint);
  return c;
}

WeightedComb deformed_weighted_model_set(const CutProjectScheme& scheme, const WeightFunction& f,
                                         const DeformationMap& p, const Box& region, PatchSelection selection) {
  require_dim(region, scheme.phys_dim(), "patch region");
  if (!region.bounded()) throw PreconditionError("patch region must be bounded");
  if (!(f.space() == scheme.internal()) || !(p.space() == scheme.internal())) {
    throw StructuralError("weight and deformation must live on the scheme's internal space");
  }
  if (p.phys_dim() != scheme.phys_dim()) throw StructuralError("deformation has wrong physical dimension");
  f.support().euclidean_bounds();  // non-compact support is a precondition error

  const double margin = p.sup_norm() * (1 + 1e-12) + 1e-12;
  const bool by_lattice = selection == PatchSelection::Lattice;
  const std::vector<ModelPoint> pts =
      enumerate_model_set(scheme, f.support(), by_lattice ? region : region.expanded(margin));
  std::vector<std::optional<Atom>> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const ModelPoint& mp = pts[i];
    Vec pos = mp.phys;
    if (!p.is_zero()) {
      const Vec shift = p(mp.internal);
      for (std::size_t j = 0; j < pos.size(); ++j) pos[j] += shift[j];
    }
    if (!by_lattice && !region.contains(pos)) return;
    out[i] = Atom{std::move(pos), f(mp.internal), mp.k};
  });
  std::vector<Atom> atoms;
  for (auto& a : out) {
    if (a) atoms.push_back(std::move(*a));
  }
  const std::string fp = system_fingerprint_text(scheme.describe() + "|" + f.describe() + "|" + p.describe());
  if (by_lattice) {
    return WeightedComb(scheme.phys_dim(), std::move(atoms), region.expanded(margin), region.shrunk(margin), fp);
  }
  return WeightedComb(scheme.phys_dim(), std::move(atoms), region, region, fp);
}

WeightedComb modulate(const WeightedComb& comb, const ScalarField& w, const VectorField& g) {
  const int d = comb.dim();
  if (w.domain_dim() != d || g.domain_dim() != d) throw StructuralError("modulation dimension mismatch");
  std::vector<Atom> atoms(comb.atoms().size());
  parallel_for(atoms.size(), [&](std::size_t i) {
    const Atom& a = comb.atoms()[i];
    Vec pos = a.position;
    const Vec shift = g(a.position);
    if (static_cast<int>(shift.size()) != d) throw StructuralError("displacement has wrong dimension");
    for (int j = 0; j < d; ++j) pos[j] += shift[j];
    atoms[i] = Atom{std::move(pos), a.weight * w(a.position), a.label};
  });
  const double s = g.sup_bound() * (1 + 1e-12);
  const std::string fp = comb.fingerprint().empty()
                             ? std::string()
                             : system_fingerprint_text(comb.fingerprint() + "|mod|" + w.describe() + "|" + g.describe());
  return WeightedComb(d, std::move(atoms), comb.region().expanded(s), comb.exhaustive_region().shrunk(s), fp);
}

ComposedScheme realize_composed_scheme(const CutProjectScheme& scheme, const WeightFunction& f,
                                       const DeformationMap& p, const ApFunction& w, const ApFunction& g) {
  const int d = scheme.phys_dim();
  if (w.out_dim() != 1 || w.domain_dim() != d) throw StructuralError("weight modulation must be scalar on R^d");
  if (!g.real_output() || g.out_dim() != d || g.domain_dim() != d) {
    throw StructuralError("displacement must be real vector valued with out_dim = d");
  }
  // One torus coordinate per frequency up to integer multiples (so omega and
  // -omega share a coordinate); shortest rows first.
  std::vector<Vec> cands = g.frequency_rows();
  for (const Vec& r : w.frequency_rows()) {
    if (std::find(cands.begin(), cands.end(), r) == cands.end()) cands.push_back(r);
  }
  auto norm2 = [](const Vec& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return s;
  };
  std::stable_sort(cands.begin(), cands.end(), [&](const Vec& a, const Vec& b) {
    const double na = norm2(a), nb = norm2(b);
    if (na != nb) return na < nb;
    return a > b;
  });
  struct RepTerm {
    int row;
    long long mult;
    Complex coef;
  };
  std::vector<Vec> rows;
  auto locate = [&rows, &norm2](const Vec& freq) -> std::pair<int, long long> {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      double dot = 0;
      for (std::size_t i = 0; i < freq.size(); ++i) dot += freq[i] * rows[j][i];
      const long long k = std::llround(dot / norm2(rows[j]));
      if (k == 0) continue;
      bool same = true;
      for (std::size_t i = 0; same && i < freq.size(); ++i) {
        same = std::abs(freq[i] - static_cast<double>(k) * rows[j][i]) <= 1e-12 * std::max(1.0, std::abs(freq[i]));
      }
      if (same) return {static_cast<int>(j), k};
    }
    return {-1, 0};
  };
  for (const Vec& c : cands) {
    if (locate(c).first < 0) rows.push_back(c);
  }
  const CutProjectScheme ext = extend_scheme(scheme, rows);
  const InternalSpace base = scheme.internal();
  const int n0 = base.coordinate_count();

  auto rep = [&locate](const Term& t) {
    if (std::all_of(t.freq.begin(), t.freq.end(), [](double v) { return v == 0.0; })) return RepTerm{-1, 0, t.coef};
    const auto [row, k] = locate(t.freq);
    return RepTerm{row, k, t.coef};
  };
  std::vector<std::vector<RepTerm>> g_terms;
  for (const auto& comp : g.components()) {
    std::vector<RepTerm> terms;
    for (const Term& t : comp) terms.push_back(rep(t));
    g_terms.push_back(std::move(terms));
  }
  std::vector<RepTerm> w_terms;
  for (const Term& t : w.components()[0]) w_terms.push_back(rep(t));

  // shifted torus coordinates u + W p(y)
  auto shifted = [rows, n0](const InternalPoint& y, const Vec& pv) {
    Vec u(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
      long double v = y[n0 + j];
      for (std::size_t i = 0; i < pv.size(); ++i) v += static_cast<long double>(rows[j][i]) * pv[i];
      u[j] = static_cast<double>(v - std::floor(v));
    }
    return u;
  };
  auto eval_rep = [](const std::vector<RepTerm>& terms, const Vec& u) {
    Complex s = 0.0;
    for (const RepTerm& t : terms) {
      s += t.row < 0 ? t.coef : t.coef * std::polar(1.0, kTwoPi * static_cast<double>(t.mult) * u[t.row]);
    }
    return s;
  };

  const DeformationMap p_base = p;
  const WeightFunction f_base = f;
  auto p_fn = [base, p_base, g_terms, shifted, eval_rep, d](const InternalPoint& y) {
    const InternalPoint y0 = project_leading(base, y);
    Vec pv = p_base(y0);
    const Vec u = shifted(y, pv);
    for (int i = 0; i < d; ++i) pv[i] += eval_rep(g_terms[i], u).real();
    return pv;
  };
  auto f_fn = [base, p_base, f_base, w_terms, shifted, eval_rep](const InternalPoint& y) {
    const InternalPoint y0 = project_leading(base, y);
    const Complex fv = f_base(y0);
    if (fv == Complex(0.0)) return fv;
    return fv * eval_rep(w_terms, shifted(y, p_base(y0)));
  };
  WeightFunction f_prime(ext.internal(), f_fn, f.support().embedded_in(ext.internal()), f.sup_abs() * w.sup_bound(),
                         "composed_w(" + f.describe() + "," + w.describe() + "," + p.describe() + ")");
  DeformationMap p_prime(ext.internal(), d, p_fn, p.sup_norm() + g.sup_bound(),
                         "composed_p(" + p.describe() + "," + g.describe() + ")");
  return {ext, std::move(f_prime), std::move(p_prime), std::move(rows)};
}

IdealCrystal::IdealCrystal(Eigen::MatrixXd gamma_basis, std::vector<Vec> offsets, double tol)
    : basis_(std::move(gamma_basis)), tol_(tol) {
  const int d = static_cast<int>(basis_.rows());
  if (d < 1 || basis_.cols() != d) throw StructuralError("lattice basis must be square");
  if (!(std::abs(basis_.determinant()) > 1e-12)) throw StructuralError("lattice basis is singular");
  if (offsets.empty()) throw PreconditionError("ideal crystal needs at least one offset");
  std::vector<Vec> reduced;
  for (const Vec& o : offsets) {
    if (static_cast<int>(o.size()) != d) throw StructuralError("offset has wrong dimension");
    const Vec c = reduce(o);
    for (const Vec& r : reduced) {
      const Vec rc = reduce(r);
      double worst = 0.0;
      for (int i = 0; i < d; ++i) {
        double diff = std::abs(rc[i] - c[i]);
        worst = std::max(worst, std::min(diff, 1.0 - diff));
      }
      if (worst < tol_) throw StructuralError("offsets coincide modulo the lattice");
    }
    const Eigen::VectorXd x = basis_ * Eigen::Map<const Eigen::VectorXd>(c.data(), d);
    reduced.emplace_back(x.data(), x.data() + d);
  }
  std::sort(reduced.begin(), reduced.end());
  offsets_ = std::move(reduced);
}

Vec IdealCrystal::reduce(const Vec& x) const {
  const int d = dim();
  const Eigen::VectorXd c = basis_.fullPivLu().solve(Eigen::Map<const Eigen::VectorXd>(x.data(), d));
  Vec out(d);
  for (int i = 0; i < d; ++i) {
    double v = c(i) - std::floor(c(i));
    if (v > 1.0 - tol_ || v < tol_) v = 0.0;
    out[i] = v;
  }
  return out;
}

WeightedComb IdealCrystal::patch(const Box& region) const {
  const int d = dim();
  require_dim(region, d, "crystal patch region");
  if (!region.bounded()) throw PreconditionError("patch region must be bounded");
  const Eigen::MatrixXd inv = basis_.inverse();
  std::vector<Atom> atoms;
  for (std::size_t o = 0; o < offsets_.size(); ++o) {
    Vec lo(d, std::numeric_limits<double>::infinity()), hi(d, -std::numeric_limits<double>::infinity());
    for (long long mask = 0; mask < (1LL << d); ++mask) {
      Eigen::VectorXd corner(d);
      for (int i = 0; i < d; ++i) corner(i) = ((mask >> i) & 1 ? region.hi[i] : region.lo[i]) - offsets_[o][i];
      const Eigen::VectorXd c = inv * corner;
      for (int i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], c(i));
        hi[i] = std::max(hi[i], c(i));
      }
    }
    KLabel k(d), klo(d), khi(d);
    for (int i = 0; i < d; ++i) {
      klo[i] = static_cast<long long>(std::floor(lo[i])) - 1;
      khi[i] = static_cast<long long>(std::ceil(hi[i])) + 1;
      k[i] = klo[i];
    }
    for (;;) {
      Vec x(offsets_[o]);
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) x[i] += basis_(i, j) * static_cast<double>(k[j]);
      }
      if (region.contains(x, 1e-12 * (1.0 + std::abs(x[0])))) {
        KLabel label = k;
        label.push_back(static_cast<long long>(o));
        atoms.push_back({std::move(x), Complex(1.0), std::move(label)});
      }
      int i = d - 1;
      while (i >= 0 && k[i] == khi[i]) k[i] = klo[i], --i;
      if (i < 0) break;
      ++k[i];
    }
  }
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return lex_less(a.position, b.position); });
  return WeightedComb(d, std::move(atoms), region, region);
}

IdealCrystal commensurate_modulate(const IdealCrystal& crystal, const ApFunction& g) {
  const int d = crystal.dim();
  if (!g.real_output() || g.out_dim() != d || g.domain_dim() != d) {
    throw StructuralError("displacement must be real vector valued with out_dim = d");
  }
  const FullPeriodicity fp = full_periodicity_on_lattice(g, crystal.gamma_basis());
  if (!fp.commensurate) throw PreconditionError("modulation is not commensurate: " + fp.reason);

  // HNF is lower triangular, so the box prod [0, h_ii) lists the cosets
  std::vector<long long> diag(d);
  for (int i = 0; i < d; ++i) diag[i] = fp.sublattice[i][i];
  std::vector<Vec> points;
  KLabel k(d, 0);
  for (;;) {
    for (const Vec& f : crystal.offsets()) {
      Vec x = f;
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) x[i] += crystal.gamma_basis()(i, j) * static_cast<double>(k[j]);
      }
      const Vec shift = g.vector_value(x);
      for (int i = 0; i < d; ++i) x[i] += shift[i];
      points.push_back(std::move(x));
    }
    int i = d - 1;
    while (i >= 0 && k[i] == diag[i] - 1) k[i--] = 0;
    if (i < 0) break;
    ++k[i];
  }
  return IdealCrystal(fp.basis, std::move(points));
}

std::optional<PeriodGroup> period_group(const WeightedComb& comb, double tol) {
  if (comb.atoms().empty()) throw PreconditionError("period search on an empty comb");
  const int d = comb.dim();
  const WeightedComb c = comb.canonical(std::min(tol, 1e-12));
  const Complex w0 = c.atoms().front().weight;
  for (const Atom& a : c.atoms()) {
    if (std::abs(a.weight - w0) > 1e-9 * (1.0 + std::abs(w0))) {
      throw PreconditionError("period search needs uniform weights");
    }
  }
  const Box e = comb.exhaustive_region().shrunk(tol);
  if (e.empty()) throw PreconditionError("exhaustive region is empty");
  std::vector<Vec> pts;
  for (const Atom& a : c.atoms()) pts.push_back(a.position);
  const PointIndex index(pts, tol);
  std::vector<Vec> inside;
  for (const Vec& p : pts) {
    if (e.contains(p)) inside.push_back(p);
  }

  double half_extent = std::numeric_limits<double>::infinity();
  for (int i = 0; i < d; ++i) half_extent = std::min(half_extent, (e.hi[i] - e.lo[i]) / 2);

  std::vector<Vec> seeds(inside.begin(), inside.begin() + std::min<std::size_t>(50, inside.size()));
  std::vector<Vec> candidates;
  for (const Vec& a : seeds) {
    for (const Vec& b : seeds) {
      Vec t(d);
      double norm = 0.0, inf = 0.0;
      for (int i = 0; i < d; ++i) {
        t[i] = a[i] - b[i];
        norm += t[i] * t[i];
        inf = std::max(inf, std::abs(t[i]));
      }
      if (std::sqrt(norm) <= tol || inf > half_extent) continue;
      bool dup = false;
      for (const Vec& u : candidates) {
        if (dist(u, t) <= tol) {
          dup = true;
          break;
        }
      }
      if (!dup) candidates.push_back(std::move(t));
    }
  }
  auto norm_of = [](const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  std::sort(candidates.begin(), candidates.end(), [&](const Vec& a, const Vec& b) {
    const double na = norm_of(a), nb = norm_of(b);
    if (std::abs(na - nb) > tol) return na < nb;
    return b < a;  // prefer the positive representative
  });

  auto validated = [&](const Vec& t) {
    std::size_t checked = 0;
    for (const Vec& x : inside) {
      for (int sign : {1, -1}) {
        Vec y = x;
        for (int i = 0; i < d; ++i) y[i] += sign * t[i];
        if (!e.contains(y)) continue;
        ++checked;
        if (!index.contains(y)) return false;
      }
    }
    return checked > 0;
  };

  PeriodGroup result;
  std::vector<Vec> periods;
  for (const Vec& t : candidates) {
    ++result.candidates_tested;
    if (validated(t)) periods.push_back(t);
  }
  result.periods_validated = static_cast<int>(periods.size());

  // greedy successive minima
  std::vector<Vec> chosen;
  for (const Vec& t : periods) {
    if (static_cast<int>(chosen.size()) == d) break;
    Eigen::MatrixXd m(d, chosen.size() + 1);
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      for (int i = 0; i < d; ++i) m(i, j) = chosen[j][i];
    }
    for (int i = 0; i < d; ++i) m(i, chosen.size()) = t[i];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-9);
    if (lu.rank() == static_cast<int>(chosen.size()) + 1) chosen.push_back(t);
  }
  if (static_cast<int>(chosen.size()) < d) return std::nullopt;
  result.basis.resize(d, d);
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) result.basis(i, j) = chosen[j][i];
  }
  // every validated period must be an integer combination of the basis
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(result.basis);
  for (const Vec& t : periods) {
    const Eigen::VectorXd c = lu.solve(Eigen::Map<const Eigen::VectorXd>(t.data(), d));
    for (int i = 0; i < d; ++i) {
      if (std::abs(c(i) - std::round(c(i))) > 1e-6) return std::nullopt;
    }
  }

  const IdealCrystal probe(result.basis, {Vec(d, 0.0)}, tol);
  std::vector<Vec> reduced_coords;
  for (const Vec& x : inside) {
    const Vec rc = probe.reduce(x);
    bool dup = false;
    for (const Vec& r : reduced_coords) {
      double worst = 0.0;
      for (int i = 0; i < d; ++i) {
        const double diff = std::abs(r[i] - rc[i]);
        worst = std::max(worst, std::min(diff, 1.0 - diff));
      }
      if (worst < 1e-6) {
        dup = true;
        break;
      }
    }
    if (!dup) reduced_coords.push_back(rc);
  }
  for (const Vec& rc : reduced_coords) {
    const Eigen::VectorXd x = result.basis * Eigen::Map<const Eigen::VectorXd>(rc.data(), d);
    result.offsets.emplace_back(x.data(), x.data() + d);
  }
  std::sort(result.offsets.begin(), result.offsets.end());
  return result;
}

double smoothed_translation_deviation(const WeightedComb& comb, double h, double t, Interval range) {
  if (comb.dim() != 1) throw PreconditionError("smoothed deviation is implemented for d = 1");
  if (!(h > 0)) throw PreconditionError("tent half width must be positive");
  const Box& e = comb.exhaustive_region();
  const double reach = std::abs(t) + h;
  if (range.lo - reach < e.lo[0] || range.hi + reach > e.hi[0]) {
    throw PreconditionError("range plus translation and tent width exceeds the exhaustive region");
  }
  std::vector<std::pair<double, Complex>> atoms;
  for (const Atom& a : comb.atoms()) atoms.emplace_back(a.position[0], a.weight);
  std::sort(atoms.begin(), atoms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  auto phi = [&](double x) {
    auto it = std::lower_bound(atoms.begin(), atoms.end(), x - h,
                               [](const auto& a, double v) { return a.first < v; });
    Complex s = 0.0;
    for (; it != atoms.end() && it->first <= x + h; ++it) {
      s += it->second * std::max(0.0, 1.0 - std::abs(x - it->first) / h);
    }
    return s;
  };
  double best = 0.0;
  auto probe = [&](double x) {
    if (x < range.lo || x > range.hi) return;
    best = std::max(best, std::abs(phi(x - t) - phi(x)));
  };
  probe(range.lo);
  probe(range.hi);
  for (const auto& [a, w] : atoms) {
    if (a < range.lo - reach || a > range.hi + reach) continue;
    for (double k : {-h, 0.0, h}) {
      probe(a + k);
      probe(a + t + k);
    }
  }
  return best;
}

}  // namespace apdiff
