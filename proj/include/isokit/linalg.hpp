#pragma once

// Exact dense linear algebra over an ordered field Scalar (Rational in
// practice). Everything here is deterministic: pivot choices never depend on
// floating-point magnitudes.

#include "isokit/rational.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace isokit {

template <typename Scalar>
Scalar determinant(MatrixX<Scalar> m) {
  const Eigen::Index n = m.rows();
  Scalar det = 1;
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return Scalar(0);
    if (p != c) {
      m.row(p).swap(m.row(c));
      det = -det;
    }
    det *= m(c, c);
    for (Eigen::Index r = c + 1; r < n; ++r) {
      if (m(r, c) == 0) continue;
      Scalar f = m(r, c) / m(c, c);
      for (Eigen::Index k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

/// Outcome of symmetric LDL^T with diagonal pivoting.
template <typename Scalar>
struct LdlResult {
  bool psd = false;
  /// Pivot rows in elimination order and their pivots (zero rows omitted).
  std::vector<Eigen::Index> order;
  std::vector<Scalar> pivots;
  /// Column i holds the multipliers of pivot i; L(order[i], i) == 1.
  MatrixX<Scalar> L;
  /// When !psd: offending entry of the Schur complement.
  Eigen::Index fail_row = -1;
  Eigen::Index fail_col = -1;
  Scalar fail_value = 0;
};

/// Exact LDL^T of a symmetric matrix. At each step the remaining diagonal
/// entry of largest magnitude is eliminated (ties: lowest index). A negative
/// pivot, or a zero pivot whose row is nonzero, certifies that the matrix is
/// not positive semidefinite.
template <typename Scalar>
LdlResult<Scalar> ldl_pivoted(MatrixX<Scalar> m) {
  const Eigen::Index n = m.rows();
  LdlResult<Scalar> res;
  res.L = MatrixX<Scalar>::Zero(n, n);
  std::vector<bool> done(n, false);
  auto magnitude = [](const Scalar& x) { return x < 0 ? Scalar(-x) : x; };
  for (;;) {
    Eigen::Index p = -1;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!done[i] && (p < 0 || magnitude(m(i, i)) > magnitude(m(p, p)))) p = i;
    if (p < 0) break;
    if (m(p, p) < 0) {
      res.fail_row = res.fail_col = p;
      res.fail_value = m(p, p);
      return res;
    }
    if (m(p, p) == 0) {
      // Every remaining diagonal is zero; any nonzero entry is a certificate.
      for (Eigen::Index i = 0; i < n; ++i) {
        if (done[i]) continue;
        for (Eigen::Index j = 0; j < n; ++j) {
          if (done[j] || m(i, j) == 0) continue;
          res.fail_row = i;
          res.fail_col = j;
          res.fail_value = m(i, j);
          return res;
        }
      }
      break;
    }
    const Eigen::Index col = static_cast<Eigen::Index>(res.order.size());
    const Scalar d = m(p, p);
    res.order.push_back(p);
    res.pivots.push_back(d);
    done[p] = true;
    res.L(p, col) = 1;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!done[i]) res.L(i, col) = m(i, p) / d;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (done[i] || res.L(i, col) == 0) continue;
      for (Eigen::Index j = 0; j < n; ++j)
        if (!done[j]) m(i, j) -= res.L(i, col) * m(p, j);
    }
  }
  res.psd = true;
  res.L.conservativeResize(n, static_cast<Eigen::Index>(res.order.size()));
  return res;
}

/// Exact phase-I simplex with Bland's rule: a point x >= 0 with A x = b, or
/// nullopt when none exists.
template <typename Scalar>
std::optional<VectorX<Scalar>> simplex_feasible(const MatrixX<Scalar>& A, const VectorX<Scalar>& b) {
  const Eigen::Index rows = A.rows(), vars = A.cols();
  const Eigen::Index cols = vars + rows + 1;  // originals, artificials, rhs
  MatrixX<Scalar> t = MatrixX<Scalar>::Zero(rows + 1, cols);
  std::vector<Eigen::Index> basic(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    Scalar s = b(i) < 0 ? Scalar(-1) : Scalar(1);
    for (Eigen::Index j = 0; j < vars; ++j) t(i, j) = s * A(i, j);
    t(i, vars + i) = 1;
    t(i, cols - 1) = s * b(i);
    basic[i] = vars + i;
  }
  // Objective row: reduced costs of minimizing the sum of artificials.
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < vars; ++j) t(rows, j) -= t(i, j);
    t(rows, cols - 1) -= t(i, cols - 1);
  }
  for (;;) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < vars + rows; ++j)
      if (t(rows, j) < 0) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    Scalar best;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (t(i, enter) <= 0) continue;
      Scalar ratio = t(i, cols - 1) / t(i, enter);
      if (leave < 0 || ratio < best || (ratio == best && basic[i] < basic[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) break;  // unbounded direction; cannot happen for phase I
    Scalar piv = t(leave, enter);
    for (Eigen::Index j = 0; j < cols; ++j) t(leave, j) /= piv;
    for (Eigen::Index i = 0; i <= rows; ++i) {
      if (i == leave || t(i, enter) == 0) continue;
      Scalar f = t(i, enter);
      for (Eigen::Index j = 0; j < cols; ++j) t(i, j) -= f * t(leave, j);
    }
    basic[leave] = enter;
  }
  if (t(rows, cols - 1) != 0) return std::nullopt;
  VectorX<Scalar> x = VectorX<Scalar>::Zero(vars);
  for (Eigen::Index i = 0; i < rows; ++i)
    if (basic[i] < vars) x(basic[i]) = t(i, cols - 1);
  return x;
}

/// Fourier-Motzkin decision of {A x = b, x >= 0}. Exponential; intended as an
/// independent cross-check for a handful of variables.
template <typename Scalar>
bool fourier_motzkin_feasible(const MatrixX<Scalar>& A, const VectorX<Scalar>& b) {
  using Row = std::vector<Scalar>;  // coefficients..., rhs   (row . x <= rhs)
  const std::size_t vars = static_cast<std::size_t>(A.cols());
  std::vector<Row> rows;
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    Row up(vars + 1), down(vars + 1);
    for (std::size_t j = 0; j < vars; ++j) {
      up[j] = A(i, static_cast<Eigen::Index>(j));
      down[j] = -up[j];
    }
    up[vars] = b(i);
    down[vars] = -b(i);
    rows.push_back(std::move(up));
    rows.push_back(std::move(down));
  }
  for (std::size_t j = 0; j < vars; ++j) {
    Row r(vars + 1);
    r[j] = -1;
    rows.push_back(std::move(r));
  }
  auto normalize = [&](Row& r) {
    // Scale so the first nonzero coefficient has magnitude 1.
    for (std::size_t j = 0; j <= vars; ++j) {
      if (r[j] == 0) continue;
      Scalar s = r[j] < 0 ? Scalar(-r[j]) : r[j];
      for (auto& x : r) x /= s;
      return;
    }
  };
  for (std::size_t k = 0; k < vars; ++k) {
    std::vector<Row> pos, neg, keep;
    for (auto& r : rows) {
      if (r[k] > 0) pos.push_back(r);
      else if (r[k] < 0) neg.push_back(r);
      else keep.push_back(r);
    }
    for (const auto& p : pos)
      for (const auto& q : neg) {
        Row c(vars + 1);
        Scalar fp = -q[k], fq = p[k];
        for (std::size_t j = 0; j <= vars; ++j) c[j] = fp * p[j] + fq * q[j];
        c[k] = 0;
        keep.push_back(std::move(c));
      }
    for (auto& r : keep) normalize(r);
    std::sort(keep.begin(), keep.end());
    keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
    rows = std::move(keep);
  }
  return std::all_of(rows.begin(), rows.end(), [&](const Row& r) { return r[vars] >= 0; });
}

}  // namespace isokit
