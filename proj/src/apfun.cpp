#include "apdiff/apfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "apdiff/errors.hpp"

namespace apdiff {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Complex plane_wave(const Vec& freq, const Vec& x) {
  const double turns = dot(freq, x);
  return std::polar(1.0, kTwoPi * (turns - std::round(turns)));
}

Vec negated(const Vec& v) {
  Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -v[i];
  return out;
}

std::vector<Term> merge_terms(int domain_dim, std::vector<Term> terms) {
  std::vector<Term> merged;
  for (Term& t : terms) {
    if (static_cast<int>(t.freq.size()) != domain_dim) {
      throw StructuralError("frequency row has dimension " + std::to_string(t.freq.size()) +
                            ", expected " + std::to_string(domain_dim));
    }
    for (double& v : t.freq) {
      if (v == 0.0) v = 0.0;  // fold -0
    }
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Term& m) { return m.freq == t.freq; });
    if (it == merged.end()) {
      merged.push_back(std::move(t));
    } else {
      it->coef += t.coef;
      if (!it->exact) it->exact = t.exact;
    }
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == Complex(0.0); });
  return merged;
}

void check_conjugate_symmetric(const std::vector<Term>& terms) {
  for (const Term& t : terms) {
    const Vec neg = negated(t.freq);
    auto it = std::find_if(terms.begin(), terms.end(), [&](const Term& m) {
      for (std::size_t i = 0; i < neg.size(); ++i) {
        if (std::abs(m.freq[i] - neg[i]) > 1e-15 * (1.0 + std::abs(neg[i]))) return false;
      }
      return true;
    });
    if (it == terms.end() || std::abs(it->coef - std::conj(t.coef)) > 1e-12 * (1.0 + std::abs(t.coef))) {
      std::string row;
      for (double v : t.freq) row += (row.empty() ? "" : ",") + fmt(v);
      throw StructuralError("real-valued trigonometric polynomial lacks the conjugate partner of frequency (" +
                            row + ")");
    }
  }
}

}  // namespace

std::vector<Term> real_tone(Vec freq, double amp, double phase, std::optional<std::vector<Rational>> exact) {
  std::optional<std::vector<Rational>> neg_exact;
  if (exact) {
    neg_exact = *exact;
    for (Rational& r : *neg_exact) r = -r;
  }
  const Complex c = 0.5 * amp * std::polar(1.0, phase);
  Vec neg = negated(freq);
  return {{std::move(freq), c, std::move(exact)}, {std::move(neg), std::conj(c), std::move(neg_exact)}};
}

std::vector<Term> sine_tone(Vec freq, double amp, std::optional<std::vector<Rational>> exact) {
  std::optional<std::vector<Rational>> neg_exact;
  if (exact) {
    neg_exact = *exact;
    for (Rational& r : *neg_exact) r = -r;
  }
  const Complex c(0.0, -0.5 * amp);  // amp / (2i)
  Vec neg = negated(freq);
  return {{std::move(freq), c, std::move(exact)}, {std::move(neg), -c, std::move(neg_exact)}};
}

ApFunction::ApFunction(int domain_dim, std::vector<std::vector<Term>> components, bool real)
    : domain_dim_(domain_dim), real_(real), components_(std::move(components)) {}

ApFunction ApFunction::scalar(int domain_dim, std::vector<Term> terms) {
  if (domain_dim < 1) throw StructuralError("domain dimension must be positive");
  return ApFunction(domain_dim, {merge_terms(domain_dim, std::move(terms))}, false);
}

ApFunction ApFunction::real_vector(int domain_dim, std::vector<std::vector<Term>> components) {
  if (domain_dim < 1) throw StructuralError("domain dimension must be positive");
  if (components.empty()) throw StructuralError("vector function needs at least one component");
  std::vector<std::vector<Term>> merged;
  for (auto& c : components) {
    merged.push_back(merge_terms(domain_dim, std::move(c)));
    check_conjugate_symmetric(merged.back());
  }
  return ApFunction(domain_dim, std::move(merged), true);
}

ApFunction ApFunction::zero_vector(int domain_dim, int out_dim) {
  return real_vector(domain_dim, std::vector<std::vector<Term>>(out_dim));
}

ApFunction ApFunction::constant(int domain_dim, Complex c) {
  return scalar(domain_dim, {{Vec(domain_dim, 0.0), c, std::vector<Rational>(domain_dim, Rational(0))}});
}

bool ApFunction::is_zero() const {
  for (const auto& c : components_) {
    if (!c.empty()) return false;
  }
  return true;
}

Complex ApFunction::component_value(int comp, const Vec& x) const {
  if (static_cast<int>(x.size()) != domain_dim_) throw StructuralError("evaluation point has wrong dimension");
  Complex s = 0.0;
  for (const Term& t : components_[comp]) s += t.coef * plane_wave(t.freq, x);
  return s;
}

Complex ApFunction::value(const Vec& x) const {
  if (out_dim() != 1) throw StructuralError("value() needs a scalar function");
  const Complex v = component_value(0, x);
  return real_ ? Complex(v.real(), 0.0) : v;
}

Vec ApFunction::vector_value(const Vec& x) const {
  Vec out(out_dim());
  for (int i = 0; i < out_dim(); ++i) out[i] = component_value(i, x).real();
  return out;
}

ApFunction ApFunction::translated(const Vec& t) const {
  if (static_cast<int>(t.size()) != domain_dim_) throw StructuralError("translation has wrong dimension");
  auto comps = components_;
  for (auto& c : comps) {
    for (Term& term : c) term.coef *= std::conj(plane_wave(term.freq, t));
  }
  return ApFunction(domain_dim_, std::move(comps), real_);
}

ApFunction ApFunction::minus(const ApFunction& other) const {
  if (other.domain_dim_ != domain_dim_ || other.out_dim() != out_dim()) {
    throw StructuralError("difference of functions with different shapes");
  }
  std::vector<std::vector<Term>> comps;
  for (int i = 0; i < out_dim(); ++i) {
    std::vector<Term> terms = components_[i];
    for (Term t : other.components_[i]) {
      t.coef = -t.coef;
      terms.push_back(std::move(t));
    }
    comps.push_back(merge_terms(domain_dim_, std::move(terms)));
  }
  return ApFunction(domain_dim_, std::move(comps), real_ && other.real_);
}

std::vector<Vec> ApFunction::frequency_rows() const {
  std::vector<Vec> rows;
  for (const auto& c : components_) {
    for (const Term& t : c) {
      if (std::all_of(t.freq.begin(), t.freq.end(), [](double v) { return v == 0.0; })) continue;
      if (std::find(rows.begin(), rows.end(), t.freq) == rows.end()) rows.push_back(t.freq);
    }
  }
  return rows;
}

double ApFunction::sup_bound() const {
  double total = 0.0;
  for (const auto& c : components_) {
    double s = 0.0;
    for (const Term& t : c) s += std::abs(t.coef);
    total += s * s;
  }
  return std::sqrt(total);
}

std::string ApFunction::describe() const {
  std::string out = real_ ? "ap_real(" : "ap(";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) out += ";";
    for (const Term& t : components_[i]) {
      out += "{";
      for (double v : t.freq) out += fmt(v) + ",";
      out += ":" + fmt(t.coef.real()) + "," + fmt(t.coef.imag()) + "}";
    }
  }
  return out + ")";
}

SampleGrid default_sample_grid(const ApFunction& f) {
  const int d = f.domain_dim();
  SampleGrid grid;
  grid.lo.assign(d, 0.0);
  grid.hi.assign(d, 1.0);
  for (int axis = 0; axis < d; ++axis) {
    double smallest = std::numeric_limits<double>::infinity();
    for (const Vec& row : f.frequency_rows()) {
      if (row[axis] != 0.0) smallest = std::min(smallest, std::abs(row[axis]));
    }
    if (std::isfinite(smallest)) grid.hi[axis] = 1.0 / smallest;
  }
  grid.points_per_dim = std::max(8, static_cast<int>(std::lround(std::pow(2048.0, 1.0 / d))));
  return grid;
}

namespace {

template <class Fn>
double sample_max(const SampleGrid& grid, Fn&& fn) {
  const int d = static_cast<int>(grid.lo.size());
  const int n = grid.points_per_dim;
  if (n < 1) throw PreconditionError("sample grid needs at least one point per axis");
  std::vector<int> idx(d, 0);
  Vec x(d);
  double best = 0.0;
  for (;;) {
    for (int i = 0; i < d; ++i) x[i] = grid.lo[i] + (grid.hi[i] - grid.lo[i]) * idx[i] / n;
    best = std::max(best, fn(x));
    int i = d - 1;
    while (i >= 0 && idx[i] == n - 1) idx[i--] = 0;
    if (i < 0) break;
    ++idx[i];
  }
  return best;
}

double norm_of(const ApFunction& f, const Vec& x) {
  double s = 0.0;
  for (int c = 0; c < f.out_dim(); ++c) {
    const Complex v = f.component_value(c, x);
    s += f.real_output() ? v.real() * v.real() : std::norm(v);
  }
  return std::sqrt(s);
}

}  // namespace

double sup_estimate(const ApFunction& f, const SampleGrid& grid) {
  return sample_max(grid, [&](const Vec& x) { return norm_of(f, x); });
}

double translation_deviation(const ApFunction& f, const Vec& t, const SampleGrid& grid) {
  const ApFunction diff = f.translated(t).minus(f);
  return sup_estimate(diff, grid);
}

ScalarField::ScalarField(int domain_dim, Fn fn, double sup_bound, std::string description)
    : dim_(domain_dim), fn_(std::move(fn)), sup_(sup_bound), desc_(std::move(description)) {}

ScalarField::ScalarField(const ApFunction& f)
    : dim_(f.domain_dim()), sup_(f.sup_bound()), desc_(f.describe()) {
  if (f.out_dim() != 1) throw StructuralError("weight modulation must be scalar");
  fn_ = [f](const Vec& x) { return f.value(x); };
}

ScalarField ScalarField::one(int domain_dim) {
  return ScalarField(domain_dim, [](const Vec&) { return Complex(1.0); }, 1.0, "one");
}

VectorField::VectorField(int domain_dim, Fn fn, double sup_bound, std::string description)
    : dim_(domain_dim), fn_(std::move(fn)), sup_(sup_bound), desc_(std::move(description)) {}

VectorField::VectorField(const ApFunction& g)
    : dim_(g.domain_dim()), sup_(g.sup_bound()), desc_(g.describe()) {
  if (!g.real_output() || g.out_dim() != g.domain_dim()) {
    throw StructuralError("displacement must be real vector valued with out_dim = d");
  }
  fn_ = [g](const Vec& x) { return g.vector_value(x); };
}

VectorField VectorField::zero(int domain_dim) {
  return VectorField(domain_dim, [domain_dim](const Vec&) { return Vec(domain_dim, 0.0); }, 0.0, "zero");
}

VectorField compose_modulation(const VectorField& g, const VectorField& g_prime) {
  if (g.domain_dim() != g_prime.domain_dim()) throw StructuralError("composed displacements differ in dimension");
  auto fn = [g, g_prime](const Vec& x) {
    Vec shift = g(x);
    Vec moved = x;
    for (std::size_t i = 0; i < x.size(); ++i) moved[i] += shift[i];
    const Vec second = g_prime(moved);
    for (std::size_t i = 0; i < x.size(); ++i) shift[i] += second[i];
    return shift;
  };
  return VectorField(g.domain_dim(), fn, g.sup_bound() + g_prime.sup_bound(),
                     "compose(" + g.describe() + "," + g_prime.describe() + ")");
}

ScalarField compose_weight(const ScalarField& w, const ScalarField& w_prime, const VectorField& g) {
  if (w.domain_dim() != w_prime.domain_dim() || w.domain_dim() != g.domain_dim()) {
    throw StructuralError("composed weight dimensions differ");
  }
  auto fn = [w, w_prime, g](const Vec& x) {
    const Vec shift = g(x);
    Vec moved = x;
    for (std::size_t i = 0; i < x.size(); ++i) moved[i] += shift[i];
    return w(x) * w_prime(moved);
  };
  return ScalarField(w.domain_dim(), fn, w.sup_bound() * w_prime.sup_bound(),
                     "compose_w(" + w.describe() + "," + w_prime.describe() + "," + g.describe() + ")");
}

PeriodReport almost_periods(const ApFunction& f, double epsilon, double scan_end, double scan_step,
                            const std::optional<SampleGrid>& grid, Vec direction) {
  if (!(epsilon > 0)) throw PreconditionError("epsilon must be positive");
  if (!(scan_step > 0)) throw PreconditionError("scan step must be positive");
  if (!(scan_end > 0)) throw PreconditionError("empty scan range");
  const int d = f.domain_dim();
  if (direction.empty()) {
    direction.assign(d, 0.0);
    direction[0] = 1.0;
  }
  if (static_cast<int>(direction.size()) != d) throw StructuralError("scan direction has wrong dimension");
  const SampleGrid g = grid ? *grid : default_sample_grid(f);

  PeriodReport report;
  report.epsilon = epsilon;
  report.direction = direction;
  report.scan_end = scan_end;
  report.scan_step = scan_step;
  const long long steps = static_cast<long long>(std::floor(scan_end / scan_step + 1e-9));
  Vec t(d);
  for (long long j = 0; j <= steps; ++j) {
    const double s = static_cast<double>(j) * scan_step;
    for (int i = 0; i < d; ++i) t[i] = s * direction[i];
    const double dev = translation_deviation(f, t, g);
    if (dev <= epsilon) {
      report.periods.push_back(s);
      report.deviations.push_back(dev);
    }
  }
  report.max_gap = std::numeric_limits<double>::infinity();
  if (report.periods.size() >= 2) {
    report.max_gap = 0.0;
    for (std::size_t i = 1; i < report.periods.size(); ++i) {
      report.max_gap = std::max(report.max_gap, report.periods[i] - report.periods[i - 1]);
    }
  }
  report.relative_density_witness =
      report.periods.empty() ? std::numeric_limits<double>::infinity()
                             : std::max(report.periods.size() >= 2 ? report.max_gap : 0.0,
                                        scan_end - report.periods.back());
  return report;
}

FullPeriodicity full_periodicity_on_lattice(const ApFunction& g, const Eigen::MatrixXd& gamma_basis) {
  const int d = static_cast<int>(gamma_basis.rows());
  if (gamma_basis.cols() != d || d != g.domain_dim()) throw StructuralError("lattice basis has wrong shape");
  FullPeriodicity result;

  std::vector<std::vector<Rational>> basis(d, std::vector<Rational>(d));
  bool basis_rational = true;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      auto q = rationalize(gamma_basis(i, j));
      if (!q) {
        basis_rational = false;
      } else {
        basis[i][j] = *q;
      }
    }
  }

  std::vector<std::vector<Rational>> constraints;
  for (const auto& comp : g.components()) {
    for (const Term& t : comp) {
      const bool zero_row = std::all_of(t.freq.begin(), t.freq.end(), [](double v) { return v == 0.0; });
      if (zero_row) continue;
      std::string row;
      for (double v : t.freq) row += (row.empty() ? "" : ",") + fmt(v);
      if (!t.exact) {
        result.reason = "frequency (" + row + ") is not declared rational";
        return result;
      }
      if (!basis_rational) {
        result.reason = "lattice basis is not rational; frequency (" + row + ") cannot be integral on it";
        return result;
      }
      // c_j = omega . b_j
      std::vector<Rational> c(d, Rational(0));
      for (int j = 0; j < d; ++j) {
        for (int i = 0; i < d; ++i) c[j] += (*t.exact)[i] * basis[i][j];
      }
      constraints.push_back(std::move(c));
    }
  }
  result.commensurate = true;
  result.sublattice = integer_kernel_mod_one(constraints, d);
  result.index = abs_determinant(result.sublattice);
  result.basis.resize(d, d);
  for (int col = 0; col < d; ++col) {
    for (int row = 0; row < d; ++row) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += gamma_basis(row, i) * static_cast<double>(result.sublattice[i][col]);
      result.basis(row, col) = s;
    }
  }
  return result;
}

}  // namespace apdiff
