#include "isokit/series.hpp"

#include "isokit/error.hpp"

#include <numeric>
#include <sstream>

namespace isokit {

int total_degree(const Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

PolarizedSeries::PolarizedSeries(int n, int order) : n_(n), order_(order) {
  if (n < 0 || order < 0) throw Error(ErrorKind::InvalidArgument, "negative series shape");
}

PolarizedSeries PolarizedSeries::constant(int n, int order, const Rational& c) {
  PolarizedSeries s(n, order);
  s.add(Exponents(2 * n, 0), c);
  return s;
}

PolarizedSeries PolarizedSeries::monomial(int n, int order, const std::vector<int>& z_exp,
                                          const std::vector<int>& xi_exp, const Rational& c) {
  if (static_cast<int>(z_exp.size()) != n || static_cast<int>(xi_exp.size()) != n)
    throw Error(ErrorKind::InvalidArgument, "exponent vector length must equal n");
  Exponents e(z_exp);
  e.insert(e.end(), xi_exp.begin(), xi_exp.end());
  PolarizedSeries s(n, order);
  s.add(e, c);
  return s;
}

Rational PolarizedSeries::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

int PolarizedSeries::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
  return d;
}

void PolarizedSeries::add(const Exponents& e, const Rational& c) {
  if (c == 0) return;
  if (static_cast<int>(e.size()) != 2 * n_)
    throw Error(ErrorKind::InvalidArgument, "exponent vector length must equal 2n");
  for (int x : e)
    if (x < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent in series term");
  if (total_degree(e) > order_) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

PolarizedSeries PolarizedSeries::truncated(int order) const {
  PolarizedSeries r(n_, order);
  for (const auto& [e, c] : terms_) r.add(e, c);
  return r;
}

PolarizedSeries& PolarizedSeries::operator+=(const PolarizedSeries& o) {
  if (o.n_ != n_) throw Error(ErrorKind::InvalidArgument, "series dimension mismatch");
  for (const auto& [e, c] : o.terms_) add(e, c);
  return *this;
}

PolarizedSeries& PolarizedSeries::operator-=(const PolarizedSeries& o) {
  if (o.n_ != n_) throw Error(ErrorKind::InvalidArgument, "series dimension mismatch");
  for (const auto& [e, c] : o.terms_) add(e, -c);
  return *this;
}

PolarizedSeries& PolarizedSeries::operator*=(const Rational& k) {
  if (k == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= k;
  return *this;
}

std::string PolarizedSeries::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Graded order reads better than the storage order.
  std::vector<std::pair<Exponents, Rational>> sorted(terms_.begin(), terms_.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    int da = total_degree(a.first), db = total_degree(b.first);
    if (da != db) return da < db;
    return a.first > b.first;
  });
  for (const auto& [e, c] : sorted) {
    Rational a = abs(c);
    if (first) os << (c < 0 ? "-" : "");
    else os << (c < 0 ? " - " : " + ");
    first = false;
    bool is_const = total_degree(e) == 0;
    bool need_star = false;
    if (a != 1 || is_const) {
      os << to_string(a);
      need_star = true;
    }
    for (int i = 0; i < 2 * n_; ++i) {
      if (e[i] == 0) continue;
      if (need_star) os << "*";
      os << (i < n_ ? "z" : "xi") << (i < n_ ? i + 1 : i - n_ + 1);
      if (e[i] > 1) os << "^" << e[i];
      need_star = true;
    }
  }
  return os.str();
}

PolarizedSeries series_mul(const PolarizedSeries& a, const PolarizedSeries& b, int order) {
  if (a.n() != b.n()) throw Error(ErrorKind::InvalidArgument, "series dimension mismatch");
  PolarizedSeries r(a.n(), order);
  Exponents e(2 * a.n());
  for (const auto& [ea, ca] : a.terms()) {
    int da = total_degree(ea);
    if (da > order) continue;
    for (const auto& [eb, cb] : b.terms()) {
      if (da + total_degree(eb) > order) continue;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add(e, ca * cb);
    }
  }
  return r;
}

PolarizedSeries series_pow(const PolarizedSeries& a, unsigned k, int order) {
  PolarizedSeries result = PolarizedSeries::constant(a.n(), order, 1);
  PolarizedSeries base = a.truncated(order);
  while (k > 0) {
    if (k & 1u) result = series_mul(result, base, order);
    k >>= 1u;
    if (k > 0) base = series_mul(base, base, order);
  }
  return result;
}

namespace {

void require_zero_constant(const PolarizedSeries& s) {
  if (s.constant_term() != 0)
    throw Error(ErrorKind::NonzeroConstantTerm, "series argument must vanish at the origin");
}

// sum_{k>=1} coeff(k) * s^k, stopping once s^k is truncated away.
template <typename CoeffFn>
PolarizedSeries compose(const PolarizedSeries& s, int order, CoeffFn&& coeff) {
  require_zero_constant(s);
  PolarizedSeries acc(s.n(), order);
  PolarizedSeries base = s.truncated(order);
  PolarizedSeries power = base;
  for (int k = 1; !power.is_zero(); ++k) {
    acc += coeff(k) * power;
    power = series_mul(power, base, order);
  }
  return acc;
}

}  // namespace

PolarizedSeries series_log1p(const PolarizedSeries& s, int order) {
  return compose(s, order, [](int k) { return Rational(k % 2 ? 1 : -1, k); });
}

PolarizedSeries series_expm1(const PolarizedSeries& s, int order) {
  Rational fact = 1;
  return compose(s, order, [&fact](int k) {
    fact *= k;
    return Rational(1) / fact;
  });
}

PolarizedSeries series_binomial_pow(const PolarizedSeries& s, const Rational& a, int order) {
  PolarizedSeries r = compose(s, order, [&a](int k) { return binomial(a, k); });
  r.add(Exponents(2 * s.n(), 0), 1);
  return r;
}

PolarizedSeries mixed_part(const PolarizedSeries& s) {
  PolarizedSeries r(s.n(), s.order());
  int n = s.n();
  for (const auto& [e, c] : s.terms()) {
    bool has_z = false, has_xi = false;
    for (int i = 0; i < n; ++i) {
      has_z |= e[i] > 0;
      has_xi |= e[n + i] > 0;
    }
    if (has_z && has_xi) r.add(e, c);
  }
  return r;
}

namespace {
PolarizedSeries diff_index(const PolarizedSeries& s, int index) {
  PolarizedSeries r(s.n(), std::max(0, s.order() - 1));
  for (const auto& [e, c] : s.terms()) {
    if (e[index] == 0) continue;
    Exponents d = e;
    d[index] -= 1;
    r.add(d, c * e[index]);
  }
  return r;
}
}  // namespace

PolarizedSeries diff_z(const PolarizedSeries& s, int alpha) {
  if (alpha < 0 || alpha >= s.n()) throw Error(ErrorKind::InvalidArgument, "bad z index");
  return diff_index(s, alpha);
}

PolarizedSeries diff_xi(const PolarizedSeries& s, int beta) {
  if (beta < 0 || beta >= s.n()) throw Error(ErrorKind::InvalidArgument, "bad xi index");
  return diff_index(s, s.n() + beta);
}

SeriesMatrix ddbar(const PolarizedSeries& s) {
  int n = s.n();
  SeriesMatrix m(n, std::vector<PolarizedSeries>(n));
  for (int a = 0; a < n; ++a) {
    PolarizedSeries dz = diff_z(s, a);
    for (int b = 0; b < n; ++b) m[a][b] = diff_xi(dz, b).truncated(std::max(0, s.order() - 2));
  }
  return m;
}

std::vector<PolarizedSeries> weighted_log_residual(const SeriesWithWeights& parts) {
  if (parts.parts.empty()) return {};
  const auto& first = parts.parts.front();
  int n = first.series.n(), order = first.series.order();
  const BasisPtr& basis = first.weight.basis();
  std::vector<PolarizedSeries> acc(basis->size(), PolarizedSeries(n, order));
  for (const auto& [w, s] : parts.parts) {
    if (s.n() != n || s.order() != order)
      throw Error(ErrorKind::InvalidArgument, "weighted series must share n and order");
    if (!same_basis(w.basis(), basis))
      throw Error(ErrorKind::MixedBasis, "weights declared over different bases");
    if (s.constant_term() != 1)
      throw Error(ErrorKind::NonUnitConstantTerm,
                  "each factor must have constant term 1, got " + to_string(s.constant_term()));
    PolarizedSeries shifted = s;
    shifted.add(Exponents(2 * n, 0), -1);
    PolarizedSeries lg = series_log1p(shifted, order);
    for (std::size_t k = 0; k < basis->size(); ++k)
      if (w[k] != 0) acc[k] += w[k] * lg;
  }
  for (auto& a : acc) a = mixed_part(a);
  return acc;
}

bool all_zero(const std::vector<PolarizedSeries>& residual) {
  return std::all_of(residual.begin(), residual.end(),
                     [](const PolarizedSeries& s) { return s.is_zero(); });
}

}  // namespace isokit
