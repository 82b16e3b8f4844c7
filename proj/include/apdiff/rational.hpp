#pragma once

// Exact rational and integer-lattice helpers used wherever commensurability
// must be decided without floating-point guesswork.

#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace apdiff {

using Rational = boost::rational<long long>;
using IntMatrix = std::vector<std::vector<long long>>;  // row-major

// Best rational approximation with denominator <= max_den; accepted only if it
// reproduces x within tol.
std::optional<Rational> rationalize(double x, long long max_den = 1'000'000, double tol = 1e-12);

// Parses "p/q", "p", or a decimal literal ("0.25" becomes 1/4). Throws
// std::invalid_argument on malformed text.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);
double to_double(const Rational& r);

long long lcm_checked(long long a, long long b);

// Column-style Hermite normal form: returns H = A*U (U unimodular) with H
// lower triangular, positive diagonal, and 0 <= H[i][j] < H[i][i] for j < i.
// Columns of A must be linearly independent and A square.
IntMatrix hermite_normal_form(IntMatrix columns_as_matrix);

// Sublattice {k in Z^d : rows * k ≡ 0 (mod 1)} for a rational constraint
// matrix; returned as a square integer matrix whose columns form a basis.
IntMatrix integer_kernel_mod_one(const std::vector<std::vector<Rational>>& rows, int dim);

// |det| of a square integer matrix with independent columns.
long long abs_determinant(const IntMatrix& m);

}  // namespace apdiff
