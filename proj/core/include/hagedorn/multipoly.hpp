#pragma once

#include <map>
#include <string>
#include <vector>

#include "hagedorn/types.hpp"

namespace hagedorn {

using MultiIndex = std::vector<int>;

int order(const MultiIndex& alpha);
double factorial(const MultiIndex& alpha);
/// Components joined by ';', e.g. "1;0".
std::string to_string(const MultiIndex& alpha);
MultiIndex parse_multi_index(const std::string& text);

/// All multi-indices of n components with |k| <= max_order, in graded
/// lexicographic order.
std::vector<MultiIndex> indices_up_to(int n, int max_order);

/// Graded lexicographic order: total degree first, then lexicographic.
struct GradedLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// Sparse polynomial in n variables. Zero coefficients are never stored.
class MultiPoly {
 public:
  using Terms = std::map<MultiIndex, Complex, GradedLess>;

  explicit MultiPoly(int n = 1);

  static MultiPoly constant(int n, Complex c);
  static MultiPoly monomial(const MultiIndex& k, Complex c = 1.0);
  /// sum_j a_j x_j
  static MultiPoly linear(const CVector& a);

  int n() const noexcept { return n_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Maximal |k| with nonzero coefficient; -1 for the zero polynomial.
  int degree() const;
  Complex coefficient(const MultiIndex& k) const;

  void add(const MultiIndex& k, Complex c);

  MultiPoly& operator+=(const MultiPoly& other);
  MultiPoly& operator-=(const MultiPoly& other);
  MultiPoly& operator*=(Complex c);
  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, Complex c) { return a *= c; }
  friend MultiPoly operator*(Complex c, MultiPoly a) { return a *= c; }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);

  /// x_j * p
  MultiPoly times_variable(int j) const;
  MultiPoly derivative(int j) const;
  Complex evaluate(const CVector& x) const;

  /// p(A x) for an n x n matrix A.
  MultiPoly substitute_linear(const CMatrix& a) const;
  /// p(A x + c).
  MultiPoly substitute_affine(const CMatrix& a, const CVector& c) const;

  /// Largest coefficient modulus of (this - other).
  double distance(const MultiPoly& other) const;

 private:
  int n_;
  Terms terms_;
};

/// r_alpha(x; M) from r_0 = 1 and r_{b+e_j} = x_j r_b - sum_k M_jk b_k r_{b-e_k}.
/// Throws AsymmetricM when M != M^T.
MultiPoly poly_recursion(const CMatrix& m, const MultiIndex& alpha, double tol = Tolerances{}.frame);

/// Analytic gradient of r_alpha: entry j is alpha_j r_{alpha-e_j}.
std::vector<MultiPoly> poly_gradient(const MultiPoly& p, const MultiIndex& alpha);

/// Values of r_alpha(y; M) at the columns of y (n x N), computed with the
/// same recursion directly on the values.
CVector recursion_values(const CMatrix& m, const MultiIndex& alpha, const CMatrix& y);

}  // namespace hagedorn
