#pragma once

// Exact decision procedures on conformal factors mu_l, lambda_j, r.

#include "isokit/scalar.hpp"

#include <optional>
#include <string>
#include <vector>

namespace isokit {

struct ConformalData {
  BasisPtr basis;
  std::vector<QModReal> mu;
  std::vector<QModReal> lambda;
  QModReal r;

  /// Throws NonPositiveEntry unless every mu and lambda is positive, and
  /// MixedBasis if anything is declared over another basis.
  void validate(RefineOptions opts = {}) const;
};

struct ConeWitness {
  std::vector<Rational> c;  // on lambda
  std::vector<Rational> d;  // on mu
  QModReal value;
};

struct ConeResult {
  bool holds = true;
  std::optional<ConeWitness> witness;
  std::string note;
};

/// Decides whether the nonnegative rational cones of lambda and mu meet only
/// in 0, by exact phase-I simplex on sum c_j = 1, sum c_j lambda_j = sum d_l mu_l
/// (coordinate-wise). With at most `fm_limit` unknowns the answer is also
/// recomputed by Fourier-Motzkin and a disagreement raises Internal.
ConeResult cone_condition(const ConformalData& data, RefineOptions opts = {}, int fm_limit = 6);

/// Independent Fourier-Motzkin decision of the same feasibility problem.
bool cone_violated_fm(const ConformalData& data);

struct FactorSolution {
  std::vector<int> m;
  std::vector<int> n;

  friend bool operator==(const FactorSolution&, const FactorSolution&) = default;
  friend auto operator<=>(const FactorSolution&, const FactorSolution&) = default;
};

/// Every (m, n) with entries in [lo, bound] (lo = 1, or 0 with allow_zero) such
/// that r = sum mu_l m_l - sum lambda_j n_j holds coordinate-wise. Sorted.
std::vector<FactorSolution> solve_factor_equation(const ConformalData& data, int bound,
                                                  bool allow_zero = false);

/// Smallest index minimizing a_i / b_i.
std::size_t min_ratio_index(const std::vector<QModReal>& a, const std::vector<QModReal>& b,
                            RefineOptions opts = {});

}  // namespace isokit
