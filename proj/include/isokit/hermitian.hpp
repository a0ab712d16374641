#pragma once

// Gram-matrix algebra for polarized potentials 1 + F(z).conj(F)(xi).

#include "isokit/rational.hpp"
#include "isokit/scalar.hpp"
#include "isokit/series.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace isokit {

/// z-exponent vector of length n.
using Monomial = std::vector<int>;

/// Graded order, ties by descending lexicographic exponents (z1 before z2).
bool monomial_less(const Monomial& a, const Monomial& b);
std::string monomial_str(const Monomial& m, const char* var = "z");

/// r * sqrt(q), q > 0. Perfect-square radicands are folded into r.
struct RadicalCoeff {
  Rational r = 0;
  Rational q = 1;

  RadicalCoeff() = default;
  RadicalCoeff(Rational r_, Rational q_ = 1);

  bool is_rational() const { return q == 1; }
  /// "r" or "r*sqrt(q)".
  std::string str() const;

  friend bool operator==(const RadicalCoeff&, const RadicalCoeff&) = default;
};

RadicalCoeff operator*(const RadicalCoeff& a, const RadicalCoeff& b);

/// One holomorphic polynomial component: monomial -> r*sqrt(q).
using MapComponent = std::map<Monomial, RadicalCoeff>;

std::string component_str(const MapComponent& c);

/// Polynomial map C^n -> C^N.
class MapTuple {
 public:
  MapTuple() = default;
  explicit MapTuple(int n, std::vector<MapComponent> components = {}, bool normalized = true);

  int n() const { return n_; }
  std::size_t dimension() const { return components_.size(); }
  const std::vector<MapComponent>& components() const { return components_; }
  bool normalized() const { return normalized_; }

  friend bool operator==(const MapTuple&, const MapTuple&) = default;

 private:
  int n_ = 0;
  std::vector<MapComponent> components_;
  bool normalized_ = true;
};

/// Polynomial in (z, xi) with exponents stored as in PolarizedSeries.
using PolarizedPoly = std::map<Exponents, Rational>;

/// sum gram[a][b] z^basis[a] xi^basis[b], gram symmetric.
class HermitianForm {
 public:
  HermitianForm() = default;
  /// Throws AsymmetricInput if coeff(z^a xi^b) != coeff(z^b xi^a).
  static HermitianForm from_poly(int n, const PolarizedPoly& p);
  /// Restricts to z- and xi-monomials of degree <= max_degree.
  static HermitianForm from_series(const PolarizedSeries& s, int max_degree);
  static HermitianForm constant(int n, const Rational& c);

  int n() const { return n_; }
  const std::vector<Monomial>& basis() const { return basis_; }
  const MatrixXq& gram() const { return gram_; }

  Rational coeff(const Monomial& z, const Monomial& xi) const;
  Rational constant_term() const;
  /// Largest joint (z, xi) degree, -1 for the zero form.
  int degree() const;
  bool is_constant() const;

  PolarizedPoly to_poly() const;
  PolarizedSeries to_series(int order) const;
  std::string str() const;

  friend bool operator==(const HermitianForm& a, const HermitianForm& b) {
    return a.n_ == b.n_ && a.to_poly() == b.to_poly();
  }

 private:
  int n_ = 0;
  std::vector<Monomial> basis_;
  MatrixXq gram_;
};

struct FactorResult {
  Rational A;
  int m = 0;

  friend bool operator==(const FactorResult&, const FactorResult&) = default;
};

/// 1 + F(z).conj(F)(xi). Throws IrrationalGramEntry when the radicals do not
/// multiply out to rationals.
HermitianForm form_from_map(const MapTuple& F);

HermitianForm form_product(const HermitianForm& P, const HermitianForm& Q);
HermitianForm form_power(const HermitianForm& P, unsigned k);

/// Map H with 1+|H|^2 = (1+|F|^2)(1+|G|^2): components F, G and all F_j*G_l.
MapTuple product_map(const MapTuple& F, const MapTuple& G);
/// Map H with 1+|H|^2 = (1+|F|^2)^k; the empty map for k = 0.
MapTuple power_map(const MapTuple& F, unsigned k);

MapTuple identity_map(int n);

/// Degree <= k monomial map with sqrt(multinomial) coefficients, whose form is
/// (1 + sum z_i xi_i)^k. Has C(n+k, k) - 1 components.
MapTuple veronese(int n, int k);

struct LdlPivot {
  Monomial monomial;
  Rational value;
};

struct ResolvableResult {
  bool resolvable = false;
  /// Pivots in elimination order (all >= 0 when resolvable).
  std::vector<LdlPivot> pivots;
  /// Map whose form reproduces the input; only when resolvable.
  MapTuple witness;
  /// Certificate of failure: the (z^a, xi^b) location and the offending
  /// Schur-complement value (negative diagonal or nonzero row of a zero pivot).
  Monomial fail_z;
  Monomial fail_xi;
  Rational fail_value;
};

/// Decides whether P - 1 is a nonnegative Hermitian combination of monomials,
/// using exact LDL^T with largest-diagonal pivoting.
ResolvableResult resolvable_check(const HermitianForm& P);
/// Series input: the Gram matrix over monomials of degree <= order / 2.
ResolvableResult resolvable_check(const PolarizedSeries& P, int order);

/// Exact (A, m) with P = A * h^m, m >= 1. Throws NotAPurePower.
FactorResult factor_by_h(const HermitianForm& P, const HermitianForm& h);

/// Quotient and remainder of p by h (lexicographic leading terms).
std::pair<PolarizedPoly, PolarizedPoly> poly_divide(const PolarizedPoly& p, const PolarizedPoly& h);
PolarizedPoly poly_mul(const PolarizedPoly& a, const PolarizedPoly& b);

struct WeightedForm {
  std::string label;
  QModReal weight;
  HermitianForm form;
  MapTuple map;
};

/// sum weight_i * log(form_i) == 0 as a polarized identity.
struct IdentityInstance {
  int n = 0;
  std::vector<WeightedForm> factors;

  SeriesWithWeights to_series(int order) const;
  int max_degree() const;
};

struct Example62Input {
  std::vector<QModReal> mu;
  std::vector<QModReal> lambda;
  std::vector<int> m, n, m_prime, n_prime;
  MapTuple f;
  int dim = 1;
};

/// h_l = (1+|z|^2)^{m_l} (1+|f|^2)^{m'_l}, q_j = (1+|z|^2)^{n_j} (1+|f|^2)^{n'_j}
/// with weights mu_l, -lambda_j, and -1 on 1+|z|^2. Throws PreconditionViolated
/// unless sum m'_l mu_l == sum n'_j lambda_j and sum m_l mu_l == sum n_j lambda_j + 1.
IdentityInstance example62_construct(const Example62Input& in);

}  // namespace isokit
