#pragma once

// Truncated power series in independent variables (z_1..z_n, xi_1..xi_n),
// where xi stands in for conj(z). Truncation is by joint total degree.

#include "isokit/rational.hpp"
#include "isokit/scalar.hpp"

#include <map>
#include <string>
#include <vector>

namespace isokit {

/// Exponent vector of length 2n: z-exponents first, then xi-exponents.
using Exponents = std::vector<int>;

int total_degree(const Exponents& e);

class PolarizedSeries {
 public:
  using Terms = std::map<Exponents, Rational>;

  PolarizedSeries() = default;
  PolarizedSeries(int n, int order);

  static PolarizedSeries constant(int n, int order, const Rational& c);
  static PolarizedSeries monomial(int n, int order, const std::vector<int>& z_exp,
                                  const std::vector<int>& xi_exp, const Rational& c);

  int n() const { return n_; }
  int order() const { return order_; }
  const Terms& terms() const { return terms_; }

  Rational coeff(const Exponents& e) const;
  Rational constant_term() const { return coeff(Exponents(2 * n_, 0)); }
  bool is_zero() const { return terms_.empty(); }
  /// Largest total degree among stored terms, -1 for the zero series.
  int degree() const;

  /// Adds c * monomial; terms above the order are dropped, zeros are erased.
  void add(const Exponents& e, const Rational& c);

  /// Same terms, order lowered (or raised) to `order`.
  PolarizedSeries truncated(int order) const;

  PolarizedSeries& operator+=(const PolarizedSeries& o);
  PolarizedSeries& operator-=(const PolarizedSeries& o);
  PolarizedSeries& operator*=(const Rational& c);

  friend PolarizedSeries operator+(PolarizedSeries a, const PolarizedSeries& b) { return a += b; }
  friend PolarizedSeries operator-(PolarizedSeries a, const PolarizedSeries& b) { return a -= b; }
  friend PolarizedSeries operator*(const Rational& c, PolarizedSeries a) { return a *= c; }

  /// Term-wise equality; the truncation order is not compared.
  friend bool operator==(const PolarizedSeries& a, const PolarizedSeries& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  /// "1 + 2*z1*xi1 - 1/2*z1^2*xi1^2"
  std::string str() const;

 private:
  int n_ = 0;
  int order_ = 0;
  Terms terms_;
};

PolarizedSeries series_mul(const PolarizedSeries& a, const PolarizedSeries& b, int order);
PolarizedSeries series_pow(const PolarizedSeries& a, unsigned k, int order);

/// log(1 + s); s must have zero constant term.
PolarizedSeries series_log1p(const PolarizedSeries& s, int order);
/// exp(s) - 1; s must have zero constant term.
PolarizedSeries series_expm1(const PolarizedSeries& s, int order);
/// (1 + s)^a for rational a; s must have zero constant term.
PolarizedSeries series_binomial_pow(const PolarizedSeries& s, const Rational& a, int order);

/// Terms with both a nonzero z-part and a nonzero xi-part.
PolarizedSeries mixed_part(const PolarizedSeries& s);

PolarizedSeries diff_z(const PolarizedSeries& s, int alpha);
PolarizedSeries diff_xi(const PolarizedSeries& s, int beta);

using SeriesMatrix = std::vector<std::vector<PolarizedSeries>>;

/// n x n matrix of d^2 s / dz_alpha dxi_beta at order D - 2.
SeriesMatrix ddbar(const PolarizedSeries& s);

struct WeightedSeries {
  QModReal weight;
  PolarizedSeries series;
};

struct SeriesWithWeights {
  std::vector<WeightedSeries> parts;
};

/// Mixed part of sum_i weight_i * log(series_i), one series per coordinate of
/// the weights' basis. The weighted log identity holds to the common order iff
/// every returned series is zero.
std::vector<PolarizedSeries> weighted_log_residual(const SeriesWithWeights& parts);

bool all_zero(const std::vector<PolarizedSeries>& residual);

}  // namespace isokit
