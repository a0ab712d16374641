#include "isokit/conformal.hpp"

#include "isokit/error.hpp"
#include "isokit/linalg.hpp"

#include <algorithm>

namespace isokit {

void ConformalData::validate(RefineOptions opts) const {
  if (!basis) throw Error(ErrorKind::InvalidArgument, "conformal data without basis");
  auto check = [&](const QModReal& x, const char* name, std::size_t i) {
    if (!same_basis(x.basis(), basis))
      throw Error(ErrorKind::MixedBasis, std::string(name) + " declared over another basis");
    if (qmod_sign(x, opts) != Sign::Positive)
      throw Error(ErrorKind::NonPositiveEntry,
                  std::string(name) + "[" + std::to_string(i + 1) + "] = " + x.str() +
                      " is not positive");
  };
  for (std::size_t i = 0; i < mu.size(); ++i) check(mu[i], "mu", i);
  for (std::size_t i = 0; i < lambda.size(); ++i) check(lambda[i], "lambda", i);
  if (r.basis() && !same_basis(r.basis(), basis))
    throw Error(ErrorKind::MixedBasis, "r declared over another basis");
}

namespace {

// Unknowns (c_1..c_v, d_1..d_m); rows: one per basis coordinate, then sum c = 1.
std::pair<MatrixXq, VectorXq> cone_system(const ConformalData& data) {
  const auto v = static_cast<Eigen::Index>(data.lambda.size());
  const auto m = static_cast<Eigen::Index>(data.mu.size());
  const auto k = static_cast<Eigen::Index>(data.basis->size());
  MatrixXq A = MatrixXq::Zero(k + 1, v + m);
  VectorXq b = VectorXq::Zero(k + 1);
  for (Eigen::Index row = 0; row < k; ++row) {
    for (Eigen::Index j = 0; j < v; ++j) A(row, j) = data.lambda[j][row];
    for (Eigen::Index l = 0; l < m; ++l) A(row, v + l) = -data.mu[l][row];
  }
  for (Eigen::Index j = 0; j < v; ++j) A(k, j) = 1;
  b(k) = 1;
  return {A, b};
}

}  // namespace

bool cone_violated_fm(const ConformalData& data) {
  if (data.mu.empty() || data.lambda.empty()) return false;
  auto [A, b] = cone_system(data);
  return fourier_motzkin_feasible(A, b);
}

ConeResult cone_condition(const ConformalData& data, RefineOptions opts, int fm_limit) {
  data.validate(opts);
  ConeResult res;
  if (data.mu.empty() || data.lambda.empty()) {
    res.note = "EmptySide: one of the families is empty, the condition holds vacuously";
    return res;
  }
  auto [A, b] = cone_system(data);
  auto x = simplex_feasible(A, b);
  const std::size_t v = data.lambda.size(), m = data.mu.size();
  if (static_cast<int>(v + m) <= fm_limit) {
    bool fm = fourier_motzkin_feasible(A, b);
    if (fm != x.has_value())
      throw Error(ErrorKind::Internal, "simplex and Fourier-Motzkin disagree on the cone condition");
  }
  if (!x) return res;
  ConeWitness w;
  for (std::size_t j = 0; j < v; ++j) w.c.push_back((*x)(static_cast<Eigen::Index>(j)));
  for (std::size_t l = 0; l < m; ++l) w.d.push_back((*x)(static_cast<Eigen::Index>(v + l)));
  w.value = qmod_combine(w.c, data.lambda);
  QModReal rhs = qmod_combine(w.d, data.mu);
  if (!(w.value == rhs) || qmod_sign(w.value, opts) == Sign::Zero)
    throw Error(ErrorKind::Internal, "cone witness failed re-verification");
  res.holds = false;
  res.witness = std::move(w);
  return res;
}

std::vector<FactorSolution> solve_factor_equation(const ConformalData& data, int bound,
                                                  bool allow_zero) {
  if (bound < 1) throw Error(ErrorKind::InvalidArgument, "bound must be >= 1");
  if (!data.r.basis()) throw Error(ErrorKind::InvalidArgument, "factor equation needs r");
  data.validate();
  const int lo = allow_zero ? 0 : 1;
  const std::size_t m = data.mu.size(), v = data.lambda.size(), k = data.basis->size();
  // Variable i has coefficient column coef[i] (mu positive, lambda negated).
  std::vector<std::vector<Rational>> coef;
  for (const auto& x : data.mu) coef.push_back(x.coords());
  for (const auto& x : data.lambda) {
    std::vector<Rational> c = x.coords();
    for (auto& e : c) e = -e;
    coef.push_back(std::move(c));
  }
  const std::size_t vars = m + v;
  // Interval relaxation: reachable range of the suffix sums per coordinate.
  std::vector<std::vector<Rational>> suf_min(vars + 1, std::vector<Rational>(k)),
      suf_max(vars + 1, std::vector<Rational>(k));
  for (std::size_t i = vars; i-- > 0;)
    for (std::size_t c = 0; c < k; ++c) {
      Rational a = coef[i][c] * lo, b = coef[i][c] * bound;
      suf_min[i][c] = suf_min[i + 1][c] + std::min(a, b);
      suf_max[i][c] = suf_max[i + 1][c] + std::max(a, b);
    }
  std::vector<FactorSolution> out;
  std::vector<int> x(vars);
  std::vector<Rational> partial(k);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    for (std::size_t c = 0; c < k; ++c) {
      Rational need = data.r[c] - partial[c];
      if (need < suf_min[i][c] || need > suf_max[i][c]) return;
    }
    if (i == vars) {
      out.push_back({std::vector<int>(x.begin(), x.begin() + static_cast<long>(m)),
                     std::vector<int>(x.begin() + static_cast<long>(m), x.end())});
      return;
    }
    for (int val = lo; val <= bound; ++val) {
      x[i] = val;
      for (std::size_t c = 0; c < k; ++c) partial[c] += coef[i][c] * val;
      self(self, i + 1);
      for (std::size_t c = 0; c < k; ++c) partial[c] -= coef[i][c] * val;
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t min_ratio_index(const std::vector<QModReal>& a, const std::vector<QModReal>& b,
                            RefineOptions opts) {
  if (a.empty() || a.size() != b.size())
    throw Error(ErrorKind::InvalidArgument, "min_ratio_index needs equal nonempty lists");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (qmod_sign(a[i], opts) != Sign::Positive || qmod_sign(b[i], opts) != Sign::Positive)
      throw Error(ErrorKind::NonPositiveEntry, "entry " + std::to_string(i + 1) + " is not positive");
  std::size_t best = 0;
  for (std::size_t i = 1; i < a.size(); ++i) {
    // a_i / b_i < a_best / b_best  <=>  a_i b_best - a_best b_i < 0
    RadicalSum diff = RadicalSum::from(a[i]) * RadicalSum::from(b[best]) -
                      RadicalSum::from(a[best]) * RadicalSum::from(b[i]);
    if (radical_sign(diff, opts) == Sign::Negative) best = i;
  }
  return best;
}

}  // namespace isokit
