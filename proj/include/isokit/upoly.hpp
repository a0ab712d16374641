#pragma once

// Dense univariate polynomials with rational coefficients, plus numeric root
// approximation used to seed exact certification.

#include "isokit/rational.hpp"

#include <complex>
#include <string>
#include <vector>

namespace isokit {

using Complex = std::complex<double>;

class UPoly {
 public:
  UPoly() = default;
  /// Coefficients from the constant term upward.
  explicit UPoly(std::vector<Rational> coeffs);
  static UPoly monomial(const Rational& c, int k);
  static UPoly x() { return monomial(1, 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational operator[](int k) const { return k >= 0 && k <= degree() ? c_[k] : Rational(0); }
  Rational leading() const { return c_.empty() ? Rational(0) : c_.back(); }

  Rational operator()(const Rational& x) const;
  Complex operator()(Complex x) const;

  UPoly derivative() const;
  UPoly monic() const;
  /// p(x + c)
  UPoly shifted(const Rational& c) const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const Rational& k, const UPoly& a);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  /// "z^2 - 4"
  std::string str(const char* var = "z") const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Quotient and remainder; b must be nonzero.
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
/// Monic gcd (zero if both are zero).
UPoly gcd(const UPoly& a, const UPoly& b);
UPoly squarefree_part(const UPoly& p);

/// Distinct rational roots (exact).
std::vector<Rational> rational_roots(const UPoly& p);

/// All complex roots with multiplicity, Aberth iteration.
std::vector<Complex> numeric_roots(const std::vector<Complex>& coeffs);
std::vector<Complex> numeric_roots(const UPoly& p);

/// Points where the polynomial is evaluated by Lagrange interpolation.
UPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

}  // namespace isokit
