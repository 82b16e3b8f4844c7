#pragma once

// Almost periodic functions on R^d represented as trigonometric polynomials
// sum_k c_k exp(2 pi i omega_k . x), scalar complex or real vector valued.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "apdiff/groups.hpp"
#include "apdiff/rational.hpp"

namespace apdiff {

struct Term {
  Vec freq;
  Complex coef;
  // Set when the frequency row was declared as exact rationals.
  std::optional<std::vector<Rational>> exact;
};

// amp * cos(2 pi freq . x + phase) as a conjugate pair.
std::vector<Term> real_tone(Vec freq, double amp, double phase = 0.0,
                            std::optional<std::vector<Rational>> exact = std::nullopt);
// amp * sin(2 pi freq . x), with coefficients amp/(2i) and -amp/(2i).
std::vector<Term> sine_tone(Vec freq, double amp,
                            std::optional<std::vector<Rational>> exact = std::nullopt);

class ApFunction {
 public:
  static ApFunction scalar(int domain_dim, std::vector<Term> terms);
  // One term list per output coordinate; each must be conjugate symmetric.
  static ApFunction real_vector(int domain_dim, std::vector<std::vector<Term>> components);
  static ApFunction zero_scalar(int domain_dim) { return scalar(domain_dim, {}); }
  static ApFunction zero_vector(int domain_dim, int out_dim);
  static ApFunction constant(int domain_dim, Complex c);

  int domain_dim() const { return domain_dim_; }
  int out_dim() const { return static_cast<int>(components_.size()); }
  bool real_output() const { return real_; }
  const std::vector<std::vector<Term>>& components() const { return components_; }
  bool is_zero() const;

  Complex value(const Vec& x) const;         // scalar functions
  Vec vector_value(const Vec& x) const;      // real vector functions
  Complex component_value(int comp, const Vec& x) const;

  // x -> f(x - t), by twisting each coefficient with exp(-2 pi i omega . t).
  ApFunction translated(const Vec& t) const;
  // Pointwise f - g (same shape).
  ApFunction minus(const ApFunction& other) const;

  // Distinct frequency rows over all components, in first-seen order,
  // excluding the zero row.
  std::vector<Vec> frequency_rows() const;
  // Upper bound on sup |f| (Euclidean norm for vector outputs).
  double sup_bound() const;

  std::string describe() const;

 private:
  ApFunction(int domain_dim, std::vector<std::vector<Term>> components, bool real);

  int domain_dim_ = 1;
  bool real_ = false;
  std::vector<std::vector<Term>> components_;
};

struct SampleGrid {
  Vec lo;
  Vec hi;
  int points_per_dim = 2048;
};

// Sampling grid for sup-norm estimates: one cell of the reciprocal of the
// smallest nonzero frequency per axis, about 2048 points in total.
SampleGrid default_sample_grid(const ApFunction& f);

// Sampled sup of |f(x)| over the grid; a lower bound on the true sup.
double sup_estimate(const ApFunction& f, const SampleGrid& grid);
// Sampled sup over x of |f(x - t) - f(x)|.
double translation_deviation(const ApFunction& f, const Vec& t, const SampleGrid& grid);

// Evaluable fields, used for compositions that leave the trigonometric class.
class ScalarField {
 public:
  using Fn = std::function<Complex(const Vec&)>;
  ScalarField(int domain_dim, Fn fn, double sup_bound, std::string description);
  ScalarField(const ApFunction& f);  // NOLINT: implicit by design of the API
  static ScalarField one(int domain_dim);

  Complex operator()(const Vec& x) const { return fn_(x); }
  int domain_dim() const { return dim_; }
  double sup_bound() const { return sup_; }
  const std::string& describe() const { return desc_; }

 private:
  int dim_;
  Fn fn_;
  double sup_;
  std::string desc_;
};

class VectorField {
 public:
  using Fn = std::function<Vec(const Vec&)>;
  VectorField(int domain_dim, Fn fn, double sup_bound, std::string description);
  VectorField(const ApFunction& g);  // NOLINT
  static VectorField zero(int domain_dim);

  Vec operator()(const Vec& x) const { return fn_(x); }
  int domain_dim() const { return dim_; }
  double sup_bound() const { return sup_; }
  const std::string& describe() const { return desc_; }

 private:
  int dim_;
  Fn fn_;
  double sup_;
  std::string desc_;
};

// g''(x) = g(x) + g'(x + g(x))
VectorField compose_modulation(const VectorField& g, const VectorField& g_prime);
// w''(x) = w(x) * w'(x + g(x))
ScalarField compose_weight(const ScalarField& w, const ScalarField& w_prime, const VectorField& g);

struct PeriodReport {
  double epsilon = 0.0;
  Vec direction;
  Vec periods;     // sorted scan values t with sampled deviation <= epsilon
  Vec deviations;  // sampled deviation at each period
  double max_gap = 0.0;  // between consecutive periods; infinity if fewer than two
  // max(max_gap, distance from the last period to the end of the scan)
  double relative_density_witness = 0.0;
  double scan_end = 0.0;
  double scan_step = 0.0;
};

// Scans t = j * step, 0 <= t <= scan_end, along `direction` (default e_1)
// and keeps every t whose sampled sup deviation is at most epsilon. Periods
// between grid points are not searched.
PeriodReport almost_periods(const ApFunction& f, double epsilon, double scan_end, double scan_step,
                            const std::optional<SampleGrid>& grid = std::nullopt, Vec direction = {});

struct FullPeriodicity {
  bool commensurate = false;
  IntMatrix sublattice;     // columns: basis of L in lattice coordinates
  Eigen::MatrixXd basis;    // columns: physical basis vectors of L
  long long index = 0;      // [Gamma : L]
  std::string reason;       // why the function is not commensurate
};

// Finds the sublattice L of Gamma on which every frequency row is integral,
// so that f is constant on L-cosets. Only rows declared with exact rationals
// count as rational.
FullPeriodicity full_periodicity_on_lattice(const ApFunction& g, const Eigen::MatrixXd& gamma_basis);

}  // namespace apdiff
