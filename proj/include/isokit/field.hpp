#pragma once

// Elements of Q(i, sqrt(s)) for one positive non-square rational s, the
// coefficient field of the Puiseux engine. Each value records its s; values
// that never touched a square root carry s = 0. Combining two values whose
// square roots generate different fields raises UnsupportedCoefficientField.

#include "isokit/rational.hpp"
#include "isokit/upoly.hpp"

#include <string>
#include <utility>
#include <vector>

namespace isokit {

class Ext {
 public:
  Ext() = default;
  Ext(long v) : a_(v) {}
  Ext(Rational v) : a_(std::move(v)) {}
  /// (a + b sqrt(s)) + i (c + d sqrt(s))
  Ext(Rational a, Rational b, Rational c, Rational d, Rational s);

  static Ext i();
  static Ext gaussian(Rational re, Rational im) { return Ext(std::move(re), 0, std::move(im), 0, 0); }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  const Rational& c() const { return c_; }
  const Rational& d() const { return d_; }
  const Rational& s() const { return s_; }

  bool is_zero() const { return a_ == 0 && b_ == 0 && c_ == 0 && d_ == 0; }
  bool is_rational() const { return b_ == 0 && c_ == 0 && d_ == 0; }
  bool is_real() const { return c_ == 0 && d_ == 0; }
  /// Real and imaginary parts are both rational.
  bool is_gaussian() const { return b_ == 0 && d_ == 0; }

  Ext real() const { return Ext(a_, b_, 0, 0, s_); }
  Ext imag() const { return Ext(c_, d_, 0, 0, s_); }
  Ext conj() const { return Ext(a_, b_, -c_, -d_, s_); }

  Complex approx() const;

  Ext& operator+=(const Ext& o);
  Ext& operator-=(const Ext& o);
  Ext& operator*=(const Ext& o);
  Ext& operator/=(const Ext& o);

  friend Ext operator+(Ext x, const Ext& y) { return x += y; }
  friend Ext operator-(Ext x, const Ext& y) { return x -= y; }
  friend Ext operator*(Ext x, const Ext& y) { return x *= y; }
  friend Ext operator/(Ext x, const Ext& y) { return x /= y; }
  friend Ext operator-(const Ext& x) { return Ext(-x.a_, -x.b_, -x.c_, -x.d_, x.s_); }
  friend bool operator==(const Ext& x, const Ext& y);

  Ext inverse() const;
  Ext pow(long k) const;

  /// "1/2 - 3/2*sqrt(3)*i" style.
  std::string str() const;

 private:
  void normalize();
  // Rewrites y over this->s_ (or adopts y's); throws if incompatible.
  static void unify(Ext& x, Ext& y);

  Rational a_, b_, c_, d_, s_;
};

/// Sign of a + b sqrt(s) (s > 0), exactly.
int real_sign(const Rational& a, const Rational& b, const Rational& s);

/// A square root inside the field, possibly adjoining sqrt(s) when none is
/// present yet. Throws UnsupportedCoefficientField otherwise.
Ext field_sqrt(const Ext& x);

/// k-th root of x inside the field (perfect rational powers, square roots, and
/// their compositions). Throws UnsupportedCoefficientField.
Ext field_root(const Ext& x, int k);

/// Primitive k-th root of unity exp(2 pi i / k) for k in {1, 2, 3, 4, 6}.
Ext root_of_unity(int k);

/// Polynomial over the field, coefficients from the constant term upward.
using ExtPoly = std::vector<Ext>;

ExtPoly to_ext(const UPoly& p);
void trim(ExtPoly& p);
Ext evaluate(const ExtPoly& p, const Ext& x);

/// Roots in the field with multiplicities. Finds linear and quadratic factors
/// over Q of the norm polynomial; anything else raises
/// UnsupportedCoefficientField.
std::vector<std::pair<Ext, int>> field_roots(const ExtPoly& p);

}  // namespace isokit
