#include "isokit/hermitian.hpp"

#include "isokit/error.hpp"
#include "isokit/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace isokit {

namespace {

int degree_of(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

Exponents join(const Monomial& z, const Monomial& xi) {
  Exponents e(z);
  e.insert(e.end(), xi.begin(), xi.end());
  return e;
}

Monomial add(const Monomial& a, const Monomial& b) {
  Monomial r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

struct MonomialOrder {
  bool operator()(const Monomial& a, const Monomial& b) const { return monomial_less(a, b); }
};

}  // namespace

bool monomial_less(const Monomial& a, const Monomial& b) {
  int da = degree_of(a), db = degree_of(b);
  if (da != db) return da < db;
  return a > b;
}

std::string monomial_str(const Monomial& m, const char* var) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0) continue;
    if (!first) os << "*";
    os << var << i + 1;
    if (m[i] > 1) os << "^" << m[i];
    first = false;
  }
  return first ? "1" : os.str();
}

RadicalCoeff::RadicalCoeff(Rational r_, Rational q_) : r(std::move(r_)), q(std::move(q_)) {
  if (q <= 0) throw Error(ErrorKind::InvalidArgument, "radicand must be positive");
  if (auto s = rational_sqrt(q)) {
    r *= *s;
    q = 1;
  }
  if (r == 0) q = 1;
}

std::string RadicalCoeff::str() const {
  if (q == 1) return to_string(r);
  return to_string(r) + "*sqrt(" + to_string(q) + ")";
}

RadicalCoeff operator*(const RadicalCoeff& a, const RadicalCoeff& b) {
  return RadicalCoeff(a.r * b.r, a.q * b.q);
}

std::string component_str(const MapComponent& c) {
  if (c.empty()) return "0";
  std::vector<std::pair<Monomial, RadicalCoeff>> terms(c.begin(), c.end());
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return monomial_less(a.first, b.first); });
  std::ostringstream os;
  bool first = true;
  for (const auto& [mono, coeff] : terms) {
    RadicalCoeff a(abs(coeff.r), coeff.q);
    os << (first ? (coeff.r < 0 ? "-" : "") : (coeff.r < 0 ? " - " : " + "));
    first = false;
    bool is_const = degree_of(mono) == 0;
    if (a.r == 1 && a.q == 1 && !is_const) {
      os << monomial_str(mono);
    } else if (a.r == 1 && a.q != 1) {
      os << "sqrt(" << to_string(a.q) << ")";
      if (!is_const) os << "*" << monomial_str(mono);
    } else {
      os << a.str();
      if (!is_const) os << "*" << monomial_str(mono);
    }
  }
  return os.str();
}

MapTuple::MapTuple(int n, std::vector<MapComponent> components, bool normalized)
    : n_(n), components_(std::move(components)), normalized_(normalized) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative source dimension");
  for (auto& c : components_) {
    for (auto it = c.begin(); it != c.end();) {
      if (static_cast<int>(it->first.size()) != n)
        throw Error(ErrorKind::InvalidArgument, "map monomial has wrong length");
      if (it->second.r == 0) it = c.erase(it);
      else ++it;
    }
    if (normalized_ && c.count(Monomial(n, 0)))
      throw Error(ErrorKind::PreconditionViolated, "normalized map component must vanish at 0");
  }
}

HermitianForm HermitianForm::from_poly(int n, const PolarizedPoly& p) {
  std::set<Monomial, MonomialOrder> monos{Monomial(n, 0)};
  for (const auto& [e, c] : p) {
    if (c == 0) continue;
    if (static_cast<int>(e.size()) != 2 * n)
      throw Error(ErrorKind::InvalidArgument, "exponent vector length must equal 2n");
    monos.insert(Monomial(e.begin(), e.begin() + n));
    monos.insert(Monomial(e.begin() + n, e.end()));
  }
  HermitianForm f;
  f.n_ = n;
  f.basis_.assign(monos.begin(), monos.end());
  const auto size = static_cast<Eigen::Index>(f.basis_.size());
  f.gram_ = MatrixXq::Zero(size, size);
  auto index = [&](const Monomial& m) {
    return static_cast<Eigen::Index>(
        std::lower_bound(f.basis_.begin(), f.basis_.end(), m, monomial_less) - f.basis_.begin());
  };
  for (const auto& [e, c] : p) {
    if (c == 0) continue;
    Monomial z(e.begin(), e.begin() + n), xi(e.begin() + n, e.end());
    f.gram_(index(z), index(xi)) += c;
  }
  for (Eigen::Index i = 0; i < size; ++i)
    for (Eigen::Index j = i + 1; j < size; ++j)
      if (f.gram_(i, j) != f.gram_(j, i))
        throw Error(ErrorKind::AsymmetricInput,
                    "coefficient of " + monomial_str(f.basis_[i]) + "*" +
                        monomial_str(f.basis_[j], "xi") + " differs from its mirror");
  return f;
}

HermitianForm HermitianForm::from_series(const PolarizedSeries& s, int max_degree) {
  PolarizedPoly p;
  int n = s.n();
  for (const auto& [e, c] : s.terms()) {
    int dz = std::accumulate(e.begin(), e.begin() + n, 0);
    int dxi = std::accumulate(e.begin() + n, e.end(), 0);
    if (dz <= max_degree && dxi <= max_degree) p[e] = c;
  }
  return from_poly(n, p);
}

HermitianForm HermitianForm::constant(int n, const Rational& c) {
  PolarizedPoly p;
  p[Exponents(2 * n, 0)] = c;
  return from_poly(n, p);
}

Rational HermitianForm::coeff(const Monomial& z, const Monomial& xi) const {
  auto find = [&](const Monomial& m) -> Eigen::Index {
    auto it = std::lower_bound(basis_.begin(), basis_.end(), m, monomial_less);
    if (it == basis_.end() || *it != m) return -1;
    return static_cast<Eigen::Index>(it - basis_.begin());
  };
  Eigen::Index i = find(z), j = find(xi);
  if (i < 0 || j < 0) return 0;
  return gram_(i, j);
}

Rational HermitianForm::constant_term() const {
  return gram_.size() ? gram_(0, 0) : Rational(0);
}

int HermitianForm::degree() const {
  int d = -1;
  for (Eigen::Index i = 0; i < gram_.rows(); ++i)
    for (Eigen::Index j = 0; j < gram_.cols(); ++j)
      if (gram_(i, j) != 0) d = std::max(d, degree_of(basis_[i]) + degree_of(basis_[j]));
  return d;
}

bool HermitianForm::is_constant() const { return degree() <= 0; }

PolarizedPoly HermitianForm::to_poly() const {
  PolarizedPoly p;
  for (Eigen::Index i = 0; i < gram_.rows(); ++i)
    for (Eigen::Index j = 0; j < gram_.cols(); ++j)
      if (gram_(i, j) != 0) p[join(basis_[i], basis_[j])] = gram_(i, j);
  return p;
}

PolarizedSeries HermitianForm::to_series(int order) const {
  PolarizedSeries s(n_, order);
  for (const auto& [e, c] : to_poly()) s.add(e, c);
  return s;
}

std::string HermitianForm::str() const { return to_series(std::max(0, degree())).str(); }

HermitianForm form_from_map(const MapTuple& F) {
  const int n = F.n();
  std::map<Exponents, RadicalSum> entries;
  entries[Exponents(2 * n, 0)] = RadicalSum::of(1, 1);
  for (const auto& comp : F.components())
    for (const auto& [a, ca] : comp)
      for (const auto& [b, cb] : comp) entries[join(a, b)] += RadicalSum::of(ca.r * cb.r, ca.q * cb.q);
  PolarizedPoly p;
  for (const auto& [e, v] : entries) {
    if (v.is_zero()) continue;
    auto q = v.in_basis(QBasis::rationals());
    if (!q) {
      Monomial z(e.begin(), e.begin() + n), xi(e.begin() + n, e.end());
      throw Error(ErrorKind::IrrationalGramEntry,
                  "Gram entry at " + monomial_str(z) + "*" + monomial_str(xi, "xi") +
                      " is not rational");
    }
    p[e] = (*q)[0];
  }
  return HermitianForm::from_poly(n, p);
}

PolarizedPoly poly_mul(const PolarizedPoly& a, const PolarizedPoly& b) {
  PolarizedPoly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponents e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      Rational& slot = r[e];
      slot += ca * cb;
      if (slot == 0) r.erase(e);
    }
  return r;
}

HermitianForm form_product(const HermitianForm& P, const HermitianForm& Q) {
  if (P.n() != Q.n()) throw Error(ErrorKind::InvalidArgument, "form dimension mismatch");
  return HermitianForm::from_poly(P.n(), poly_mul(P.to_poly(), Q.to_poly()));
}

HermitianForm form_power(const HermitianForm& P, unsigned k) {
  HermitianForm r = HermitianForm::constant(P.n(), 1);
  for (unsigned i = 0; i < k; ++i) r = form_product(r, P);
  return r;
}

namespace {

MapComponent component_product(const MapComponent& a, const MapComponent& b) {
  std::map<Monomial, RadicalSum> acc;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) acc[add(ma, mb)] += RadicalSum::of(ca.r * cb.r, ca.q * cb.q);
  MapComponent out;
  for (const auto& [m, v] : acc) {
    if (v.is_zero()) continue;
    if (v.terms().size() != 1)
      throw Error(ErrorKind::UnsupportedCoefficientField,
                  "product component mixes radicals of different square classes");
    const auto& [c, r] = v.terms().front();
    out[m] = RadicalCoeff(c, r);
  }
  return out;
}

}  // namespace

MapTuple product_map(const MapTuple& F, const MapTuple& G) {
  if (F.n() != G.n()) throw Error(ErrorKind::InvalidArgument, "map dimension mismatch");
  std::vector<MapComponent> comps = F.components();
  comps.insert(comps.end(), G.components().begin(), G.components().end());
  for (const auto& a : F.components())
    for (const auto& b : G.components()) comps.push_back(component_product(a, b));
  return MapTuple(F.n(), std::move(comps), F.normalized() && G.normalized());
}

MapTuple power_map(const MapTuple& F, unsigned k) {
  MapTuple r(F.n());
  for (unsigned i = 0; i < k; ++i) r = product_map(r, F);
  return r;
}

MapTuple identity_map(int n) {
  std::vector<MapComponent> comps;
  for (int i = 0; i < n; ++i) {
    Monomial m(n, 0);
    m[i] = 1;
    comps.push_back({{m, RadicalCoeff(1)}});
  }
  return MapTuple(n, std::move(comps));
}

MapTuple veronese(int n, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidArgument, "Veronese degree must be >= 1");
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative dimension");
  // Enumerate exponent vectors with 1 <= |a| <= k.
  std::vector<Monomial> monos;
  Monomial cur(n, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n) {
      if (degree_of(cur) > 0) monos.push_back(cur);
      return;
    }
    for (int e = 0; e <= left; ++e) {
      cur[i] = e;
      self(self, i + 1, left - e);
    }
    cur[i] = 0;
  };
  rec(rec, 0, k);
  std::sort(monos.begin(), monos.end(), monomial_less);
  std::vector<Integer> fact(k + 1, Integer(1));
  for (int i = 1; i <= k; ++i) fact[i] = fact[i - 1] * i;
  std::vector<MapComponent> comps;
  for (const auto& m : monos) {
    Integer denom_f = fact[k - degree_of(m)];
    for (int e : m) denom_f *= fact[e];
    Rational multinomial(fact[k], denom_f);
    comps.push_back({{m, RadicalCoeff(1, multinomial)}});
  }
  return MapTuple(n, std::move(comps));
}

ResolvableResult resolvable_check(const HermitianForm& P) {
  if (P.constant_term() != 1)
    throw Error(ErrorKind::NonUnitConstantTerm, "resolvable_check needs constant term 1");
  MatrixXq m = P.gram();
  m(0, 0) -= 1;
  auto ldl = ldl_pivoted(m);
  ResolvableResult r;
  const auto& basis = P.basis();
  for (std::size_t i = 0; i < ldl.order.size(); ++i)
    r.pivots.push_back({basis[ldl.order[i]], ldl.pivots[i]});
  if (!ldl.psd) {
    r.fail_z = basis[ldl.fail_row];
    r.fail_xi = basis[ldl.fail_col];
    r.fail_value = ldl.fail_value;
    return r;
  }
  r.resolvable = true;
  std::vector<MapComponent> comps;
  for (Eigen::Index c = 0; c < ldl.L.cols(); ++c) {
    MapComponent comp;
    for (Eigen::Index i = 0; i < ldl.L.rows(); ++i)
      if (ldl.L(i, c) != 0) comp[basis[i]] = RadicalCoeff(ldl.L(i, c), ldl.pivots[c]);
    comps.push_back(std::move(comp));
  }
  bool normalized = std::none_of(comps.begin(), comps.end(), [&](const MapComponent& c) {
    return c.count(Monomial(P.n(), 0)) > 0;
  });
  r.witness = MapTuple(P.n(), std::move(comps), normalized);
  return r;
}

ResolvableResult resolvable_check(const PolarizedSeries& P, int order) {
  return resolvable_check(HermitianForm::from_series(P.truncated(order), order / 2));
}

std::pair<PolarizedPoly, PolarizedPoly> poly_divide(const PolarizedPoly& p, const PolarizedPoly& h) {
  if (h.empty()) throw Error(ErrorKind::InvalidArgument, "division by zero polynomial");
  const auto& [lead_e, lead_c] = *h.rbegin();
  PolarizedPoly quotient, rem = p, out;
  while (!rem.empty()) {
    auto [e, c] = *rem.rbegin();
    bool divisible = true;
    Exponents shift(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
      shift[i] = e[i] - lead_e[i];
      divisible &= shift[i] >= 0;
    }
    if (!divisible) {
      out[e] = c;
      rem.erase(e);
      continue;
    }
    Rational k = c / lead_c;
    quotient[shift] += k;
    for (const auto& [he, hc] : h) {
      Exponents t(he.size());
      for (std::size_t i = 0; i < t.size(); ++i) t[i] = he[i] + shift[i];
      Rational& slot = rem[t];
      slot -= k * hc;
      if (slot == 0) rem.erase(t);
    }
  }
  return {quotient, out};
}

FactorResult factor_by_h(const HermitianForm& P, const HermitianForm& h) {
  if (P.n() != h.n()) throw Error(ErrorKind::InvalidArgument, "form dimension mismatch");
  if (h.is_constant()) throw Error(ErrorKind::PreconditionViolated, "h must be non-constant");
  if (h.constant_term() <= 0 || P.constant_term() <= 0)
    throw Error(ErrorKind::PreconditionViolated, "constant terms must be positive");
  PolarizedPoly cur = P.to_poly(), hp = h.to_poly();
  const Exponents zero(2 * P.n(), 0);
  int m = 0;
  while (!(cur.size() == 1 && cur.begin()->first == zero)) {
    auto [q, r] = poly_divide(cur, hp);
    if (!r.empty())
      throw Error(ErrorKind::NotAPurePower,
                  "division by h leaves a remainder after " + std::to_string(m) + " step(s)");
    cur = std::move(q);
    ++m;
  }
  if (m == 0) throw Error(ErrorKind::NotAPurePower, "P is constant");
  return {cur.begin()->second, m};
}

SeriesWithWeights IdentityInstance::to_series(int order) const {
  SeriesWithWeights s;
  for (const auto& f : factors) s.parts.push_back({f.weight, f.form.to_series(order)});
  return s;
}

int IdentityInstance::max_degree() const {
  int d = 0;
  for (const auto& f : factors) d = std::max(d, f.form.degree());
  return d;
}

IdentityInstance example62_construct(const Example62Input& in) {
  if (in.mu.empty()) throw Error(ErrorKind::PreconditionViolated, "need at least one mu");
  const std::size_t nm = in.mu.size(), nl = in.lambda.size();
  if (in.m.size() != nm || in.m_prime.size() != nm || in.n.size() != nl ||
      in.n_prime.size() != nl)
    throw Error(ErrorKind::PreconditionViolated, "integer lists must match the weight counts");
  const BasisPtr& basis = in.mu.front().basis();
  if (in.f.n() != in.dim && in.f.dimension() > 0)
    throw Error(ErrorKind::PreconditionViolated, "f has the wrong source dimension");

  auto relation = [&](const std::vector<int>& a, const std::vector<int>& b) {
    QModReal lhs = QModReal::zero(basis), rhs = QModReal::zero(basis);
    for (std::size_t l = 0; l < nm; ++l) lhs = lhs + Rational(a[l]) * in.mu[l];
    for (std::size_t j = 0; j < nl; ++j) rhs = rhs + Rational(b[j]) * in.lambda[j];
    return std::pair{lhs, rhs};
  };
  auto [lp, rp] = relation(in.m_prime, in.n_prime);
  if (!(lp == rp))
    throw Error(ErrorKind::PreconditionViolated,
                "sum m'_l mu_l = " + lp.str() + " but sum n'_j lambda_j = " + rp.str());
  auto [lm, rn] = relation(in.m, in.n);
  QModReal rn1 = rn + QModReal::rational(basis, 1);
  if (!(lm == rn1))
    throw Error(ErrorKind::PreconditionViolated,
                "sum m_l mu_l = " + lm.str() + " but sum n_j lambda_j + 1 = " + rn1.str());
  for (int k : in.m)
    if (k < 0) throw Error(ErrorKind::PreconditionViolated, "negative exponent m_l");
  for (int k : in.n)
    if (k < 0) throw Error(ErrorKind::PreconditionViolated, "negative exponent n_j");

  const int dim = in.dim;
  MapTuple f = in.f.dimension() ? in.f : MapTuple(dim);
  auto build = [&](int a, int b) {
    MapTuple left = a > 0 ? veronese(dim, a) : MapTuple(dim);
    return product_map(left, power_map(f, static_cast<unsigned>(b)));
  };
  IdentityInstance inst;
  inst.n = dim;
  for (std::size_t l = 0; l < nm; ++l) {
    MapTuple F = build(in.m[l], in.m_prime[l]);
    inst.factors.push_back({"h" + std::to_string(l + 1), in.mu[l], form_from_map(F), F});
  }
  for (std::size_t j = 0; j < nl; ++j) {
    MapTuple G = build(in.n[j], in.n_prime[j]);
    inst.factors.push_back({"q" + std::to_string(j + 1), -in.lambda[j], form_from_map(G), G});
  }
  MapTuple id = identity_map(dim);
  inst.factors.push_back({"1+|z|^2", QModReal::rational(basis, -1), form_from_map(id), id});
  return inst;
}

}  // namespace isokit
