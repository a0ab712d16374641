#pragma once

// One-variable algebraic functions P(z, Y) = 0: branch loci, Newton-Puiseux
// expansions at points and at infinity, numeric monodromy along loops, and the
// simple-cyclic branching test.

#include "isokit/field.hpp"
#include "isokit/scalar.hpp"
#include "isokit/upoly.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace isokit {

class AlgebraicFunction {
 public:
  /// coeffs[j] is the coefficient of Y^j. Checks primitivity and
  /// square-freeness in Y (NotPrimitive, NotSquareFree).
  explicit AlgebraicFunction(std::vector<UPoly> coeffs);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  /// Coefficient of Y^j.
  const UPoly& coeff(int j) const { return c_[j]; }
  /// a_k(z), the coefficient of Y^{d-k}.
  const UPoly& a(int k) const { return c_[degree() - k]; }
  const UPoly& leading() const { return c_.back(); }
  /// Largest z-degree among the coefficients.
  int z_degree() const;

  /// Res_Y(P, dP/dY) with formal degrees d and d-1.
  const UPoly& resultant() const { return res_; }

  std::vector<Complex> at(Complex z) const;
  Ext eval(const Ext& z, const Ext& y) const;

  /// "Y^2 - z"
  std::string str() const;

 private:
  std::vector<UPoly> c_;
  UPoly res_;
};

/// Resultant of two polynomials in Y whose coefficients are polynomials in z,
/// with the given formal degrees.
UPoly resultant_in_y(const std::vector<UPoly>& f, const std::vector<UPoly>& g);

/// Either a point of the field or the point at infinity.
struct Center {
  bool infinity = false;
  Ext value;
  static Center at(Ext v) { return {false, std::move(v)}; }
  static Center at_infinity() { return {true, Ext(0)}; }
  std::string str() const { return infinity ? "infinity" : value.str(); }
};

/// Gaussian-rational rectangle.
struct Rect {
  Rational re_lo, re_hi, im_lo, im_hi;
  bool contains(const Ext& z) const;
};

struct LocusPoint {
  /// Square-free rational polynomial having this point as a simple root.
  UPoly poly;
  Rect box;
  Complex approx;
  /// Exact value when it lies in the supported field.
  std::optional<Ext> value;
  std::string str() const;
};

struct BranchLocus {
  std::vector<LocusPoint> points;
  bool includes_infinity = false;
};

/// Roots of the resultant and of the leading coefficient, isolated by
/// disjoint certified discs (points for rational roots).
BranchLocus branch_locus(const AlgebraicFunction& f);

/// One ramification cycle: the N conjugate branches
/// Y = sum_i terms[i] * t^i with z - c = scale * t^N (z = 1/(scale * t^N) at
/// infinity), t running over the N determinations.
struct PuiseuxSeries {
  Center center;
  int ramification = 1;
  Ext scale{1};
  std::map<int, Ext> terms;
  /// Coefficients are exact for every index up to here.
  int precision = 0;
  /// The truncated series is an exact root.
  bool exact = false;

  int leading_index() const { return terms.empty() ? 0 : terms.begin()->first; }
  Ext leading_coeff() const { return terms.empty() ? Ext(0) : terms.begin()->second; }
  /// Numeric value of the k-th conjugate branch at local parameter t.
  Complex value(Complex t, int k = 0) const;
  std::string str() const;
};

/// P rewritten in the local coordinate X at the center: P(c + X, Y), or
/// X^D P(1/X, Y) at infinity. Keyed (X-exponent, Y-exponent).
using LocalPoly = std::map<std::pair<int, int>, Ext>;
LocalPoly local_poly(const AlgebraicFunction& f, const Center& c);

/// All cycles at the center with at least `terms` coefficients from the
/// leading index on. Ramification indices sum to the degree.
std::vector<PuiseuxSeries> newton_puiseux(const AlgebraicFunction& f, const Center& c, int terms);

/// Coefficients of the local polynomial at X = scale t^N, Y = series(t).
std::map<int, Ext> substitution_residual(const AlgebraicFunction& f, const PuiseuxSeries& s);
/// Order in t through which the residual must vanish given the precision.
int guaranteed_order(const AlgebraicFunction& f, const PuiseuxSeries& s);

// Monodromy.

struct Loop {
  enum class Kind { Circle, Lassos };
  Kind kind = Kind::Circle;
  /// Circle: center and radius, starting at center - i*radius, counterclockwise.
  Ext center{0};
  Rational radius{1};
  /// Lassos: locus indices encircled in order from a common basepoint.
  std::vector<int> loci;
  /// Lassos only; chosen below all loci when absent.
  std::optional<Ext> basepoint;
  bool reversed = false;
};

struct MonodromyOptions {
  double min_step = 1e-9;
  int max_steps = 200000;
};

struct MonodromyAction {
  Ext basepoint;
  Loop loop;
  /// Branch k continues to branch permutation[k]; branches are the roots at
  /// the basepoint sorted by real then imaginary part.
  std::vector<int> permutation;
  std::vector<Complex> start_roots;
  /// Largest endpoint mismatch and smallest root separation (diagnostics).
  double residual = 0;
  double separation = 0;
  int steps = 0;
};

MonodromyAction monodromy(const AlgebraicFunction& f, const Loop& loop, const BranchLocus& locus,
                          MonodromyOptions opts = {});

/// q after p.
std::vector<int> compose(const std::vector<int>& p, const std::vector<int>& q);
/// Cycle lengths, descending.
std::vector<int> cycle_type(const std::vector<int>& perm);

// Branching classification.

struct CycleClass {
  int ramification = 1;
  int leading_index = 0;
  /// Order of the constant quotient root of unity (0 when not constant).
  int period = 0;
  bool proven = false;
  /// First index whose exponent breaks proportionality.
  std::optional<int> witness_index;
};

struct BranchingClass {
  enum class Kind { NonBranching, SimpleCyclic, NonCyclic, Inconclusive };
  Kind kind = Kind::NonBranching;
  int period = 0;
  std::vector<CycleClass> cycles;
};

std::string_view to_string(BranchingClass::Kind k);

/// Inconclusive when the computed terms are consistent with a constant
/// quotient but no exact argument closes the gap.
BranchingClass classify_branching(const AlgebraicFunction& f, const Center& c, int terms = 16);

struct LeadingCoeffReport {
  bool normalizable = false;
  /// Zeros of the leading coefficient.
  std::vector<LocusPoint> unbounded_near;
  /// Bound on every branch over |z| <= radius (when normalizable).
  Rational radius{10};
  Rational bound{0};
};

LeadingCoeffReport leading_coeff_check(const AlgebraicFunction& f, const Rational& radius = 10);

struct BranchRelation {
  long n1 = 0;
  std::vector<long> n;
  QModReal residual;
  bool holds = false;
};

/// Integer relation n1 = N0, n_alpha = -i_alpha forced by comparing lowest
/// exponents, and whether mu_1 n1 - sum mu_alpha n_alpha vanishes.
BranchRelation derive_branch_relation(const std::vector<int>& leading_exponents, int n0,
                                      const std::vector<QModReal>& weights, RefineOptions opts = {});

}  // namespace isokit
