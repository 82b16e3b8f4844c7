#include "apdiff/rational.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "apdiff/errors.hpp"

namespace apdiff {

std::optional<Rational> rationalize(double x, long long max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // continued-fraction convergents
  long long h_prev = 1, h = static_cast<long long>(std::floor(x));
  long long k_prev = 0, k = 1;
  double rem = x - std::floor(x);
  for (int iter = 0; iter < 64; ++iter) {
    if (std::abs(static_cast<double>(h) / static_cast<double>(k) - x) <= tol) {
      return Rational(h, k);
    }
    if (rem < 1e-300) break;
    const double inv = 1.0 / rem;
    const double a_real = std::floor(inv);
    if (a_real > 1e15) break;
    const long long a = static_cast<long long>(a_real);
    rem = inv - a_real;
    const long long h_next = a * h + h_prev;
    const long long k_next = a * k + k_prev;
    if (k_next > max_den || k_next <= 0) break;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
  }
  if (std::abs(static_cast<double>(h) / static_cast<double>(k) - x) <= tol) return Rational(h, k);
  return std::nullopt;
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::size_t used = 0;
    const long long num = std::stoll(text.substr(0, slash), &used);
    if (used != slash) throw std::invalid_argument("bad rational numerator: " + text);
    const std::string den_text = text.substr(slash + 1);
    const long long den = std::stoll(den_text, &used);
    if (used != den_text.size()) throw std::invalid_argument("bad rational denominator: " + text);
    if (den == 0) throw std::invalid_argument("zero denominator: " + text);
    return Rational(num, den);
  }
  // decimal literal: exact base-10 conversion
  std::string digits;
  long long scale = 1;
  bool seen_point = false;
  std::size_t start = 0;
  bool negative = false;
  if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
    negative = text[0] == '-';
    start = 1;
  }
  if (start >= text.size()) throw std::invalid_argument("empty rational: " + text);
  for (std::size_t i = start; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '.' && !seen_point) {
      seen_point = true;
    } else if (ch >= '0' && ch <= '9') {
      digits += ch;
      if (seen_point) {
        if (scale > 100'000'000'000'000LL) throw std::invalid_argument("too many decimals: " + text);
        scale *= 10;
      }
    } else {
      throw std::invalid_argument("bad rational literal: " + text);
    }
  }
  if (digits.empty()) throw std::invalid_argument("bad rational literal: " + text);
  const long long num = std::stoll(digits);
  return Rational(negative ? -num : num, scale);
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

long long lcm_checked(long long a, long long b) {
  if (a == 0 || b == 0) return 0;
  const long long g = std::gcd(a, b);
  const __int128 l = static_cast<__int128>(a / g) * b;
  if (l > static_cast<__int128>(1) << 62 || l < -(static_cast<__int128>(1) << 62)) {
    throw UnsupportedInputError("denominator overflow while forming a common multiple");
  }
  return static_cast<long long>(l < 0 ? -l : l);
}

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// column operations on a row-major square matrix
void swap_columns(IntMatrix& m, std::size_t a, std::size_t b) {
  for (auto& row : m) std::swap(row[a], row[b]);
}

void axpy_column(IntMatrix& m, std::size_t dst, std::size_t src, long long factor) {
  for (auto& row : m) row[dst] += factor * row[src];
}

void negate_column(IntMatrix& m, std::size_t col) {
  for (auto& row : m) row[col] = -row[col];
}

}  // namespace

IntMatrix hermite_normal_form(IntMatrix h) {
  const std::size_t n = h.size();
  for (const auto& row : h) {
    if (row.size() != n) throw StructuralError("hermite_normal_form needs a square matrix");
  }
  for (std::size_t i = 0; i < n; ++i) {
    // gcd-reduce row i over columns i..n-1 into column i
    for (;;) {
      std::size_t pivot = n;
      for (std::size_t j = i; j < n; ++j) {
        if (h[i][j] != 0 && (pivot == n || std::llabs(h[i][j]) < std::llabs(h[i][pivot]))) pivot = j;
      }
      if (pivot == n) throw StructuralError("hermite_normal_form: singular matrix");
      if (pivot != i) swap_columns(h, i, pivot);
      bool done = true;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (h[i][j] != 0) {
          axpy_column(h, j, i, -(h[i][j] / h[i][i]));
          if (h[i][j] != 0) done = false;
        }
      }
      if (done) break;
    }
    if (h[i][i] < 0) negate_column(h, i);
    for (std::size_t j = 0; j < i; ++j) axpy_column(h, j, i, -floor_div(h[i][j], h[i][i]));
  }
  return h;
}

long long abs_determinant(const IntMatrix& m) {
  IntMatrix h = hermite_normal_form(m);
  long long det = 1;
  for (std::size_t i = 0; i < h.size(); ++i) det *= h[i][i];
  return det;
}

IntMatrix integer_kernel_mod_one(const std::vector<std::vector<Rational>>& rows, int dim) {
  // basis columns, start with the identity
  IntMatrix basis(dim, std::vector<long long>(dim, 0));
  for (int i = 0; i < dim; ++i) basis[i][i] = 1;

  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != dim) throw StructuralError("constraint row has wrong length");
    // constraint on current basis coordinates: c_j = row . basis[:, j]
    std::vector<Rational> c(dim, Rational(0));
    for (int j = 0; j < dim; ++j) {
      for (int i = 0; i < dim; ++i) c[j] += row[i] * Rational(basis[i][j]);
    }
    long long q = 1;
    for (const Rational& v : c) q = lcm_checked(q, v.denominator());
    // integer form a_j = c_j * q, condition sum a_j x_j ≡ 0 (mod q)
    std::vector<long long> a(dim);
    for (int j = 0; j < dim; ++j) {
      const long long v = (c[j] * Rational(q)).numerator();
      a[j] = ((v % q) + q) % q;
    }
    // unimodular column ops on (a | basis) to collect gcd in column 0
    for (;;) {
      int pivot = -1;
      for (int j = 0; j < dim; ++j) {
        if (a[j] != 0 && (pivot < 0 || a[j] < a[pivot])) pivot = j;
      }
      if (pivot < 0) break;  // all zero: constraint is automatic
      if (pivot != 0) {
        std::swap(a[0], a[pivot]);
        swap_columns(basis, 0, pivot);
      }
      bool done = true;
      for (int j = 1; j < dim; ++j) {
        if (a[j] != 0) {
          const long long f = a[j] / a[0];
          a[j] -= f * a[0];
          axpy_column(basis, j, 0, -f);
          if (a[j] != 0) done = false;
        }
      }
      if (done) break;
    }
    if (a[0] != 0) {
      const long long g = std::gcd(a[0], q);
      const long long mult = q / g;
      for (auto& r : basis) r[0] *= mult;
    }
  }
  return hermite_normal_form(basis);
}

}  // namespace apdiff
