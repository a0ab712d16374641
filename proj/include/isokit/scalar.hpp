#pragma once

// Exact real scalars living in a finite-dimensional Q-vector space spanned by
// a declared basis of real constants (1, sqrt(2), ...).

#include "isokit/rational.hpp"

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace isokit {

/// Closed rational interval [lo, hi].
struct Interval {
  Rational lo;
  Rational hi;

  bool contains_zero() const { return lo <= 0 && hi >= 0; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator*(const Rational& c, const Interval& a);
Interval operator*(const Interval& a, const Interval& b);

/// How a basis entry's real value is pinned down.
struct Refiner {
  enum class Kind { Unit, Sqrt };
  Kind kind = Kind::Unit;
  Rational radicand = 1;  // only for Sqrt

  static Refiner unit() { return {}; }
  static Refiner sqrt(Rational q);

  /// Enclosure of the value after `step` refinements; width <= 2^-(step+1).
  Interval enclose(int step) const;

  /// "unit" or "sqrt(q)".
  std::string rule() const;
  static Refiner parse(const std::string& rule);

  friend bool operator==(const Refiner&, const Refiner&) = default;
};

/// Enclosure of sqrt(q) with width 2^-bits (exact integer square roots).
Interval sqrt_enclosure(const Rational& q, int bits);

struct BasisEntry {
  std::string label;
  Refiner refiner;

  friend bool operator==(const BasisEntry&, const BasisEntry&) = default;
};

/// Ordered basis; entry 0 is always the constant 1. Q-linear independence of
/// the entries is the caller's declaration and is not checked.
class QBasis {
 public:
  /// Basis {1}.
  QBasis();
  /// Prepends nothing: `entries[0]` must be the unit entry.
  explicit QBasis(std::vector<BasisEntry> entries);

  /// {1, sqrt(q1), sqrt(q2), ...} with labels "1", "sqrt(q)".
  static std::shared_ptr<const QBasis> with_sqrts(std::span<const Rational> radicands);
  static std::shared_ptr<const QBasis> rationals();

  std::size_t size() const { return entries_.size(); }
  const BasisEntry& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<BasisEntry>& entries() const { return entries_; }

  friend bool operator==(const QBasis&, const QBasis&) = default;

 private:
  std::vector<BasisEntry> entries_;
};

using BasisPtr = std::shared_ptr<const QBasis>;

bool same_basis(const BasisPtr& a, const BasisPtr& b);

/// A real number sum_i coords[i] * basis[i].
class QModReal {
 public:
  QModReal() = default;
  QModReal(BasisPtr basis, std::vector<Rational> coords);

  /// The rational q over `basis` (coordinate on the unit entry).
  static QModReal rational(BasisPtr basis, const Rational& q);
  static QModReal zero(BasisPtr basis);

  const BasisPtr& basis() const { return basis_; }
  const std::vector<Rational>& coords() const { return coords_; }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  std::size_t size() const { return coords_.size(); }

  bool is_zero() const;
  bool is_rational() const;

  /// Interval value with every basis entry refined `step` times.
  Interval enclose(int step) const;

  /// "a + b*sqrt(2)" style rendering using basis labels.
  std::string str() const;

  friend bool operator==(const QModReal& a, const QModReal& b);

 private:
  BasisPtr basis_;
  std::vector<Rational> coords_;
};

QModReal operator+(const QModReal& a, const QModReal& b);
QModReal operator-(const QModReal& a, const QModReal& b);
QModReal operator-(const QModReal& a);
QModReal operator*(const Rational& c, const QModReal& x);

/// sum_i coeffs[i] * elems[i]; throws MixedBasis.
QModReal qmod_combine(std::span<const Rational> coeffs, std::span<const QModReal> elems);

enum class Sign { Negative = -1, Zero = 0, Positive = 1 };

std::string_view to_string(Sign s);

struct RefineOptions {
  int cap = 64;
};

/// Exact zero test, then interval refinement. Throws RefinementBudgetExceeded
/// when `opts.cap` refinements cannot separate the value from 0.
Sign qmod_sign(const QModReal& x, RefineOptions opts = {});

/// sum_k coeff_k * sqrt(radicand_k), radicands merged by square class. Needed
/// because products of basis entries leave the span of the basis in general.
class RadicalSum {
 public:
  RadicalSum() = default;
  static RadicalSum of(const Rational& coeff, const Rational& radicand);
  static RadicalSum from(const QModReal& x);

  const std::vector<std::pair<Rational, Rational>>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  RadicalSum& operator+=(const RadicalSum& other);
  friend RadicalSum operator+(RadicalSum a, const RadicalSum& b) { return a += b; }
  friend RadicalSum operator-(const RadicalSum& a);
  friend RadicalSum operator-(const RadicalSum& a, const RadicalSum& b) { return a + (-b); }
  friend RadicalSum operator*(const RadicalSum& a, const RadicalSum& b);

  Interval enclose(int step) const;

  /// Coordinates over `basis` when every square class matches an entry.
  std::optional<QModReal> in_basis(const BasisPtr& basis) const;

 private:
  void add_term(const Rational& coeff, const Rational& radicand);
  // (coeff, radicand) with distinct square classes and nonzero coeffs.
  std::vector<std::pair<Rational, Rational>> terms_;
};

/// Exact sign; distinct square classes are linearly independent so zero is
/// decided symbolically.
Sign radical_sign(const RadicalSum& x, RefineOptions opts = {});

/// x * y, which must land back in the span of the shared basis.
QModReal qmod_mul(const QModReal& x, const QModReal& y);

}  // namespace isokit
