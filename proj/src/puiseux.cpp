#include "isokit/puiseux.hpp"

#include "isokit/error.hpp"
#include "isokit/linalg.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numeric>
#include <sstream>

namespace isokit {

// ---------------------------------------------------------------------------
// Algebraic functions and resultants

UPoly resultant_in_y(const std::vector<UPoly>& f, const std::vector<UPoly>& g) {
  const int m = static_cast<int>(f.size()) - 1, n = static_cast<int>(g.size()) - 1;
  if (m < 0 || n < 0) return {};
  if (m + n == 0) return UPoly({Rational(1)});
  int df = 0, dg = 0;
  for (const auto& c : f) df = std::max(df, c.degree());
  for (const auto& c : g) dg = std::max(dg, c.degree());
  const int bound = n * df + m * dg;
  std::vector<Rational> xs, ys;
  for (int k = 0; k <= bound; ++k) {
    Rational z = k;
    MatrixXq s = MatrixXq::Zero(m + n, m + n);
    for (int r = 0; r < n; ++r)
      for (int i = 0; i <= m; ++i) s(r, r + i) = f[m - i](z);
    for (int r = 0; r < m; ++r)
      for (int i = 0; i <= n; ++i) s(n + r, r + i) = g[n - i](z);
    xs.push_back(z);
    ys.push_back(determinant<Rational>(s));
  }
  return interpolate(xs, ys);
}

AlgebraicFunction::AlgebraicFunction(std::vector<UPoly> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
  if (degree() < 1) throw Error(ErrorKind::InvalidArgument, "polynomial has no Y term");
  UPoly g;
  for (const auto& c : c_)
    if (!c.is_zero()) g = gcd(g, c);
  if (g.degree() > 0)
    throw Error(ErrorKind::NotPrimitive, "coefficients share the factor " + g.str());
  std::vector<UPoly> dy;
  for (int j = 1; j <= degree(); ++j) dy.push_back(Rational(j) * c_[j]);
  res_ = resultant_in_y(c_, dy);
  if (res_.is_zero()) throw Error(ErrorKind::NotSquareFree, "polynomial has a repeated factor in Y");
}

int AlgebraicFunction::z_degree() const {
  int d = 0;
  for (const auto& c : c_) d = std::max(d, c.degree());
  return d;
}

std::vector<Complex> AlgebraicFunction::at(Complex z) const {
  std::vector<Complex> out;
  for (const auto& c : c_) out.push_back(c(z));
  return out;
}

Ext AlgebraicFunction::eval(const Ext& z, const Ext& y) const {
  Ext acc(0);
  for (int j = degree(); j >= 0; --j) acc = acc * y + evaluate(to_ext(c_[j]), z);
  return acc;
}

namespace {

void append_term(std::ostringstream& os, bool& first, const Rational& c, const std::string& vars) {
  if (c == 0) return;
  Rational a = abs(c);
  os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
  first = false;
  if (vars.empty()) {
    os << to_string(a);
  } else {
    if (a != 1) os << to_string(a) << "*";
    os << vars;
  }
}

std::string power(const char* v, int k) {
  if (k == 0) return "";
  return k == 1 ? std::string(v) : std::string(v) + "^" + std::to_string(k);
}

}  // namespace

std::string AlgebraicFunction::str() const {
  std::ostringstream os;
  bool first = true;
  for (int j = degree(); j >= 0; --j)
    for (int i = c_[j].degree(); i >= 0; --i) {
      std::string z = power("z", i), y = power("Y", j);
      append_term(os, first, c_[j][i], z.empty() ? y : y.empty() ? z : z + "*" + y);
    }
  return first ? "0" : os.str();
}

// ---------------------------------------------------------------------------
// Branch locus

bool Rect::contains(const Ext& z) const {
  if (!z.is_gaussian()) {
    Complex a = z.approx();
    return to_double(re_lo) <= a.real() && a.real() <= to_double(re_hi) &&
           to_double(im_lo) <= a.imag() && a.imag() <= to_double(im_hi);
  }
  Rational re = z.a(), im = z.c();
  return re_lo <= re && re <= re_hi && im_lo <= im && im <= im_hi;
}

std::string LocusPoint::str() const {
  if (value) return value->str();
  std::ostringstream os;
  os << "root of " << poly.str() << " in [" << to_string(box.re_lo) << ", " << to_string(box.re_hi)
     << "] x [" << to_string(box.im_lo) << ", " << to_string(box.im_hi) << "]i";
  return os.str();
}

namespace {

Rational abs2(const Ext& v) {
  Ext n = v * v.conj();
  return n.a();
}

// Smallest "nice" rational r with r^2 >= x.
Rational sqrt_upper(const Rational& x) {
  if (x <= 0) return 0;
  double r = std::sqrt(to_double(x)) * (1 + 1e-9) + 1e-300;
  Rational q = rationalize(r, 1L << 30);
  if (q <= 0) q = Rational(1, 1L << 30);
  while (q * q < x) q *= 2;
  return q;
}

Ext gaussian_approx(Complex z) {
  return Ext::gaussian(rationalize(z.real(), 1L << 24), rationalize(z.imag(), 1L << 24));
}

// Exact quadratic (or linear) minimal polynomial of a field element when it
// has degree at most two over Q.
std::optional<UPoly> small_minpoly(const Ext& v) {
  if (v.is_rational()) return UPoly({-v.a(), Rational(1)});
  if (v.is_gaussian()) {
    const Rational &a = v.a(), &b = v.c();
    return UPoly({a * a + b * b, -2 * a, Rational(1)});
  }
  if (v.is_real()) {
    const Rational &a = v.a(), &b = v.b(), &s = v.s();
    return UPoly({a * a - s * b * b, -2 * a, Rational(1)});
  }
  return std::nullopt;
}

std::vector<LocusPoint> isolate_roots(const UPoly& p) {
  std::vector<LocusPoint> out;
  if (p.degree() <= 0) return out;
  UPoly sq = squarefree_part(p);
  for (const auto& r : rational_roots(sq)) {
    LocusPoint lp;
    lp.poly = UPoly({-r, Rational(1)});
    lp.box = {r, r, 0, 0};
    lp.approx = Complex(to_double(r), 0);
    lp.value = Ext(r);
    out.push_back(lp);
    sq = divmod(sq, lp.poly).first;
  }
  if (sq.degree() >= 1) {
    const int n = sq.degree();
    auto zs = numeric_roots(sq);
    UPoly dsq = sq.derivative();
    std::vector<Ext> centers;
    std::vector<Rational> r2;
    for (const auto& z : zs) {
      Ext c = gaussian_approx(z);
      Ext v = evaluate(to_ext(sq), c), dv = evaluate(to_ext(dsq), c);
      if (dv.is_zero()) throw Error(ErrorKind::Internal, "locus isolation hit a critical point");
      centers.push_back(c);
      r2.push_back(Rational(n) * n * abs2(v) / abs2(dv));
    }
    // Discs |z - c_k| <= r_k each hold a root; pairwise disjoint discs hold
    // exactly one each.
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) {
        Rational d2 = abs2(centers[k] - centers[l]);
        Rational gap = d2 - r2[k] - r2[l];
        if (gap <= 0 || gap * gap <= 4 * r2[k] * r2[l])
          throw Error(ErrorKind::Internal, "could not separate the roots of " + sq.str());
      }
    std::vector<Ext> exact;
    try {
      for (const auto& [v, mult] : field_roots(to_ext(sq))) exact.push_back(v);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnsupportedCoefficientField) throw;
    }
    for (int k = 0; k < n; ++k) {
      LocusPoint lp;
      lp.poly = sq;
      Rational r = sqrt_upper(r2[k]);
      lp.box = {centers[k].a() - r, centers[k].a() + r, centers[k].c() - r, centers[k].c() + r};
      lp.approx = zs[k];
      const Ext* nearest = nullptr;
      for (const auto& v : exact)
        if (!nearest || std::abs(v.approx() - zs[k]) < std::abs(nearest->approx() - zs[k])) nearest = &v;
      if (nearest && std::abs(nearest->approx() - zs[k]) < 1e-6) {
        lp.value = *nearest;
        if (auto mp = small_minpoly(*nearest)) lp.poly = *mp;
      }
      out.push_back(lp);
    }
  }
  std::sort(out.begin(), out.end(), [](const LocusPoint& x, const LocusPoint& y) {
    if (x.approx.real() != y.approx.real()) return x.approx.real() < y.approx.real();
    return x.approx.imag() < y.approx.imag();
  });
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Newton-Puiseux

namespace {

using Laurent = std::map<int, Ext>;

void add_to(Laurent& p, int k, const Ext& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = p.emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}

Laurent mul(const Laurent& a, const Laurent& b, int max_exp = INT_MAX) {
  Laurent r;
  for (const auto& [i, x] : a)
    for (const auto& [j, y] : b)
      if (i + j <= max_exp) add_to(r, i + j, x * y);
  return r;
}

void add_to(LocalPoly& p, std::pair<int, int> k, const Ext& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = p.emplace(k, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) p.erase(it);
  }
}

struct State {
  Ext gamma{1};
  int e = 1;
  Laurent a;
  Ext b{1};
  int w = 0;
};

struct Edge {
  int q, m, l, j_lo, j_hi;
  ExtPoly phi;
};

// Lower hull of (j, min i) over j in [j_lo, j_hi].
std::vector<Edge> newton_edges(const LocalPoly& f, int j_lo, int j_hi) {
  std::map<int, int> low;
  for (const auto& [k, c] : f) {
    auto [i, j] = k;
    if (j < j_lo || j > j_hi) continue;
    auto it = low.find(j);
    if (it == low.end() || i < it->second) low[j] = i;
  }
  std::vector<std::pair<int, int>> hull;
  for (const auto& [j, i] : low) {
    while (hull.size() >= 2) {
      auto [j1, i1] = hull[hull.size() - 2];
      auto [j2, i2] = hull.back();
      // drop the middle point when it lies on or above the chord
      long cross = static_cast<long>(j2 - j1) * (i - i1) - static_cast<long>(i2 - i1) * (j - j1);
      if (cross <= 0) hull.pop_back();
      else break;
    }
    hull.emplace_back(j, i);
  }
  std::vector<Edge> edges;
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    auto [ja, ia] = hull[k];
    auto [jb, ib] = hull[k + 1];
    int num = ia - ib, den = jb - ja;
    int g = std::gcd(std::abs(num), den);
    Edge e{den / g, num / g, 0, ja, jb, {}};
    e.l = e.q * ia + e.m * ja;
    e.phi.assign((jb - ja) / e.q + 1, Ext(0));
    for (const auto& [key, c] : f) {
      auto [i, j] = key;
      if (j < ja || j > jb || e.q * i + e.m * j != e.l) continue;
      e.phi[(j - ja) / e.q] += c;
    }
    edges.push_back(std::move(e));
  }
  return edges;
}

// u q - v m = 1
std::pair<long, long> bezout(long q, long m) {
  long old_r = q, r = m, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    long quot = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - quot * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - quot * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - quot * t);
  }
  // old_s q + old_t m = old_r = +-1
  if (old_r < 0) {
    old_s = -old_s;
    old_t = -old_t;
  }
  return {old_s, -old_t};
}

std::vector<Rational> binomial_row(int j) {
  std::vector<Rational> row(j + 1);
  row[0] = 1;
  for (int k = 1; k <= j; ++k) row[k] = row[k - 1] * (j - k + 1) / k;
  return row;
}

struct Cycle {
  PuiseuxSeries series;
  // Regular tail: Y = A + B T^w Y_cur with F_cur(T, Y_cur) = 0.
  std::optional<LocalPoly> tail;
  int tail_w = 0;
};

class Expander {
 public:
  Expander(Center center, int terms) : center_(std::move(center)), terms_(std::max(terms, 1)) {}

  void run(const LocalPoly& f, int d) {
    expand(f, State{}, d, true);
  }

  std::vector<Cycle> cycles;

 private:
  void emit(const State& s, int precision, bool exact, std::optional<LocalPoly> tail) {
    PuiseuxSeries ps;
    ps.center = center_;
    ps.ramification = s.e;
    ps.scale = s.gamma;
    ps.precision = precision;
    ps.exact = exact;
    Ext rho(1);
    bool normalized = false;
    if (!(s.gamma == Ext(1))) {
      try {
        rho = field_root(s.gamma, s.e);
        normalized = true;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::UnsupportedCoefficientField) throw;
      }
    }
    for (const auto& [k, c] : s.a) {
      if (k > precision && !exact) continue;
      ps.terms[k] = normalized ? c * rho.pow(-k) : c;
    }
    if (normalized) ps.scale = Ext(1);
    cycles.push_back({std::move(ps), std::move(tail), s.w});
  }

  static State compose(const State& s, int q, int m, const Ext& xi, long u, long v) {
    State r;
    r.gamma = s.gamma * xi.pow(v * s.e);
    r.e = q * s.e;
    Ext xv = xi.pow(v);
    for (const auto& [k, c] : s.a) add_to(r.a, q * k, c * xv.pow(k));
    add_to(r.a, q * s.w + m, s.b * xi.pow(v * s.w + u));
    r.b = s.b * xi.pow(v * s.w);
    r.w = q * s.w + m;
    return r;
  }

  static LocalPoly transform(const LocalPoly& f, int q, int m, int l, const Ext& xi, long u, long v) {
    LocalPoly g;
    Ext xv = xi.pow(v), xu = xi.pow(u);
    for (const auto& [key, c] : f) {
      auto [i, j] = key;
      Ext base = c * xv.pow(i);
      int texp = q * i + m * j - l;
      auto row = binomial_row(j);
      for (int k = 0; k <= j; ++k) add_to(g, {texp, k}, base * Ext(row[k]) * xu.pow(j - k));
    }
    return g;
  }

  void expand(const LocalPoly& f, const State& s, int j_hi, bool first) {
    int j_lo = INT_MAX;
    for (const auto& [key, c] : f) j_lo = std::min(j_lo, key.second);
    if (j_lo > 0) {
      // Y_cur = 0 is an exact root.
      emit(s, s.w, true, std::nullopt);
      if (first && j_lo > 1) throw Error(ErrorKind::NotSquareFree, "repeated zero branch");
    }
    if (j_lo >= j_hi) return;
    for (const auto& e : newton_edges(f, j_lo, j_hi)) {
      if (!first && e.m <= 0) throw Error(ErrorKind::Internal, "non-positive slope after first level");
      auto roots = field_roots(e.phi);
      auto [u, v] = bezout(e.q, e.m);
      for (const auto& [xi, mult] : roots) {
        State next = compose(s, e.q, e.m, xi, u, v);
        LocalPoly g = transform(f, e.q, e.m, e.l, xi, u, v);
        if (mult == 1) regular(g, next);
        else expand(g, next, mult, false);
      }
    }
  }

  // F(0, 0) = 0, F_Y(0, 0) != 0: unique power-series root.
  void regular(const LocalPoly& f, State s) {
    auto f10 = f.find({0, 1});
    if (f10 == f.end()) throw Error(ErrorKind::Internal, "regular step without a simple root");
    bool zero_root = std::none_of(f.begin(), f.end(), [](const auto& kv) { return kv.first.second == 0; });
    if (zero_root) {
      emit(s, s.w, true, std::nullopt);
      return;
    }
    int i0 = s.a.empty() ? s.w : s.a.begin()->first;
    int target = i0 + terms_ - 1;
    int k_max = std::max(0, target - s.w);
    Laurent y;  // Y_cur coefficients
    for (int k = 1; k <= k_max; ++k) {
      // [T^k] F(T, y)
      Ext acc(0);
      Laurent ypow{{0, Ext(1)}};
      int jmax = 0;
      for (const auto& [key, c] : f) jmax = std::max(jmax, key.second);
      std::vector<Laurent> pows{ypow};
      for (int j = 1; j <= std::min(jmax, k); ++j) pows.push_back(mul(pows.back(), y, k));
      for (const auto& [key, c] : f) {
        auto [i, j] = key;
        if (i > k || j > k) continue;
        auto it = pows[j].find(k - i);
        if (it != pows[j].end()) acc += c * it->second;
      }
      if (!acc.is_zero()) y[k] = -acc / f10->second;
    }
    // Exactness: F(T, y) vanishes identically.
    bool exact = true;
    {
      Laurent total;
      int jmax = 0;
      for (const auto& [key, c] : f) jmax = std::max(jmax, key.second);
      std::vector<Laurent> pows{Laurent{{0, Ext(1)}}};
      for (int j = 1; j <= jmax; ++j) pows.push_back(mul(pows.back(), y));
      for (const auto& [key, c] : f) {
        auto [i, j] = key;
        for (const auto& [k, v] : pows[j]) add_to(total, i + k, c * v);
      }
      exact = total.empty();
    }
    for (const auto& [k, c] : y) add_to(s.a, s.w + k, s.b * c);
    emit(s, s.w + k_max, exact, f);
  }

  Center center_;
  int terms_;
};

Laurent local_series(const PuiseuxSeries& s) {
  Laurent y;
  for (const auto& [k, c] : s.terms) y[k] = c;
  return y;
}

std::vector<Cycle> expand_cycles(const AlgebraicFunction& f, const Center& c, int terms) {
  LocalPoly f0 = local_poly(f, c);
  Expander ex(c, terms);
  ex.run(f0, f.degree());
  int total = 0;
  for (const auto& cy : ex.cycles) total += cy.series.ramification;
  if (total != f.degree())
    throw Error(ErrorKind::Internal, "Puiseux cycles account for " + std::to_string(total) + " of " +
                                         std::to_string(f.degree()) + " branches");
  return std::move(ex.cycles);
}

}  // namespace

LocalPoly local_poly(const AlgebraicFunction& f, const Center& c) {
  LocalPoly out;
  const int dz = f.z_degree();
  for (int j = 0; j <= f.degree(); ++j) {
    const UPoly& p = f.coeff(j);
    if (c.infinity) {
      for (int i = 0; i <= p.degree(); ++i) add_to(out, {dz - i, j}, Ext(p[i]));
      continue;
    }
    // p(c + X) by Horner over the field.
    ExtPoly acc;
    for (int i = p.degree(); i >= 0; --i) {
      ExtPoly next(acc.size() + 1, Ext(0));
      for (std::size_t k = 0; k < acc.size(); ++k) {
        next[k + 1] += acc[k];
        next[k] += acc[k] * c.value;
      }
      next[0] += Ext(p[i]);
      acc = std::move(next);
    }
    for (std::size_t i = 0; i < acc.size(); ++i) add_to(out, {static_cast<int>(i), j}, acc[i]);
  }
  return out;
}

std::vector<PuiseuxSeries> newton_puiseux(const AlgebraicFunction& f, const Center& c, int terms) {
  std::vector<PuiseuxSeries> out;
  for (auto& cy : expand_cycles(f, c, terms)) out.push_back(std::move(cy.series));
  return out;
}

Complex PuiseuxSeries::value(Complex t, int k) const {
  Complex zeta = std::polar(1.0, 2 * M_PI * k / ramification);
  Complex acc = 0;
  for (const auto& [i, c] : terms) acc += c.approx() * std::pow(zeta * t, i);
  return acc;
}

std::string PuiseuxSeries::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : terms) {
    std::string cs = c.str();
    bool compound = cs.find(' ') != std::string::npos;
    bool neg = !compound && cs[0] == '-';
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    if (neg) cs = cs.substr(1);
    first = false;
    std::string tp;
    if (i != 0) {
      tp = "t";
      if (i != 1) tp += "^" + (i < 0 ? "(" + std::to_string(i) + ")" : std::to_string(i));
    }
    if (tp.empty()) os << (compound ? "(" + cs + ")" : cs);
    else if (cs == "1") os << tp;
    else os << (compound ? "(" + cs + ")" : cs) << "*" << tp;
  }
  return os.str();
}

std::map<int, Ext> substitution_residual(const AlgebraicFunction& f, const PuiseuxSeries& s) {
  LocalPoly f0 = local_poly(f, s.center);
  Laurent y = local_series(s);
  int jmax = f.degree(), imax = 0;
  for (const auto& [key, c] : f0) imax = std::max(imax, key.first);
  std::vector<Laurent> ypow{Laurent{{0, Ext(1)}}};
  for (int j = 1; j <= jmax; ++j) ypow.push_back(mul(ypow.back(), y));
  std::vector<Ext> spow{Ext(1)};
  for (int i = 1; i <= imax; ++i) spow.push_back(spow.back() * s.scale);
  Laurent total;
  for (const auto& [key, c] : f0) {
    auto [i, j] = key;
    Ext ci = c * spow[i];
    for (const auto& [k, v] : ypow[j]) add_to(total, s.ramification * i + k, ci * v);
  }
  return total;
}

int guaranteed_order(const AlgebraicFunction& f, const PuiseuxSeries& s) {
  if (s.exact) return INT_MAX;
  LocalPoly f0 = local_poly(f, s.center);
  const int n = s.ramification, i0 = s.leading_index(), e = s.precision;
  long best = LONG_MAX;
  for (int k = 1; k <= f.degree(); ++k) {
    long lk = LONG_MAX;
    for (const auto& [key, c] : f0) {
      auto [i, j] = key;
      if (j >= k) lk = std::min(lk, static_cast<long>(n) * i + static_cast<long>(j - k) * i0);
    }
    if (lk != LONG_MAX) best = std::min(best, lk + static_cast<long>(k) * (e + 1));
  }
  return static_cast<int>(std::min<long>(best, INT_MAX));
}

// ---------------------------------------------------------------------------
// Monodromy

namespace {

struct Piece {
  bool arc = false;
  Complex a, b;                  // segment endpoints
  Complex c;                     // arc center
  double r = 0, t0 = 0, t1 = 0;  // arc radius and angles
  Complex at(double s) const {
    if (!arc) return a + (b - a) * s;
    return c + std::polar(r, t0 + (t1 - t0) * s);
  }
};

struct Tracker {
  const AlgebraicFunction& f;
  MonodromyOptions opts;
  int steps = 0;

  std::vector<Complex> coeffs(Complex z) const { return f.at(z); }

  static Complex horner(const std::vector<Complex>& c, Complex y, Complex& dy) {
    Complex v = 0, d = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
      d = d * y + v;
      v = v * y + *it;
    }
    dy = d;
    return v;
  }

  bool newton(const std::vector<Complex>& c, Complex& y) const {
    for (int it = 0; it < 12; ++it) {
      Complex dy;
      Complex v = horner(c, y, dy);
      if (dy == Complex(0)) return false;
      Complex step = v / dy;
      y -= step;
      if (!std::isfinite(y.real()) || !std::isfinite(y.imag())) return false;
      if (std::abs(step) <= 1e-14 * (1 + std::abs(y))) return true;
    }
    return false;
  }

  static double min_sep(const std::vector<Complex>& ys) {
    double m = INFINITY;
    for (std::size_t i = 0; i < ys.size(); ++i)
      for (std::size_t j = i + 1; j < ys.size(); ++j) m = std::min(m, std::abs(ys[i] - ys[j]));
    return m;
  }

  void follow(const Piece& p, std::vector<Complex>& ys) {
    double s = 0, ds = 1.0 / 32;
    while (s < 1) {
      double s1 = std::min(1.0, s + ds);
      auto c1 = coeffs(p.at(s1));
      std::vector<Complex> next = ys;
      bool ok = true;
      for (std::size_t k = 0; k < ys.size() && ok; ++k) {
        double sep = INFINITY;
        for (std::size_t j = 0; j < ys.size(); ++j)
          if (j != k) sep = std::min(sep, std::abs(ys[j] - ys[k]));
        ok = newton(c1, next[k]) && std::abs(next[k] - ys[k]) < 0.25 * sep;
      }
      if (ok && ys.size() > 1) ok = min_sep(next) > 0;
      if (ok) {
        ys = std::move(next);
        s = s1;
        ds = std::min(ds * 1.5, 1.0 / 16);
        ++steps;
        if (steps > opts.max_steps) throw Error(ErrorKind::PathTooCloseToLocus, "step budget exhausted");
      } else {
        ds /= 2;
        if (ds < opts.min_step)
          throw Error(ErrorKind::PathTooCloseToLocus, "continuation stalled near z = " +
                                                          std::to_string(p.at(s).real()) + " + " +
                                                          std::to_string(p.at(s).imag()) + "i");
      }
    }
  }
};

Complex to_complex(const Ext& z) { return z.approx(); }

double dist_to_segment(Complex p, Complex a, Complex b) {
  Complex ab = b - a;
  double len2 = std::norm(ab);
  double t = len2 == 0 ? 0 : std::clamp(((p - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(p - (a + ab * t));
}

}  // namespace

std::vector<int> compose(const std::vector<int>& p, const std::vector<int>& q) {
  std::vector<int> r(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) r[k] = q[p[k]];
  return r;
}

std::vector<int> cycle_type(const std::vector<int>& perm) {
  std::vector<int> out;
  std::vector<bool> seen(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (seen[k]) continue;
    int len = 0;
    for (std::size_t j = k; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    out.push_back(len);
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

MonodromyAction monodromy(const AlgebraicFunction& f, const Loop& loop, const BranchLocus& locus,
                          MonodromyOptions opts) {
  MonodromyAction act;
  act.loop = loop;
  std::vector<Piece> pieces;
  std::vector<Complex> pts;
  for (const auto& p : locus.points) pts.push_back(p.approx);
  if (loop.kind == Loop::Kind::Circle) {
    if (loop.radius <= 0) throw Error(ErrorKind::InvalidArgument, "loop radius must be positive");
    act.basepoint = loop.center - Ext::i() * Ext(loop.radius);
    Complex c = to_complex(loop.center);
    double r = to_double(loop.radius);
    for (const auto& p : pts)
      if (std::abs(std::abs(p - c) - r) < 1e-9 * (1 + r))
        throw Error(ErrorKind::PathTooCloseToLocus, "circle passes through a locus point");
    Piece arc;
    arc.arc = true;
    arc.c = c;
    arc.r = r;
    arc.t0 = -M_PI / 2;
    arc.t1 = 3 * M_PI / 2;
    pieces.push_back(arc);
  } else {
    if (loop.loci.empty()) throw Error(ErrorKind::InvalidArgument, "lasso loop needs locus indices");
    for (int k : loop.loci)
      if (k < 0 || k >= static_cast<int>(pts.size()))
        throw Error(ErrorKind::InvalidArgument, "locus index " + std::to_string(k + 1) + " out of range");
    if (loop.basepoint) {
      act.basepoint = *loop.basepoint;
    } else {
      double lo = INFINITY, hi = -INFINITY, bottom = INFINITY, top = -INFINITY;
      for (const auto& p : pts) {
        lo = std::min(lo, p.real());
        hi = std::max(hi, p.real());
        bottom = std::min(bottom, p.imag());
        top = std::max(top, p.imag());
      }
      double spread = std::max(hi - lo, top - bottom) + 1;
      act.basepoint = Ext::gaussian(rationalize((lo + hi) / 2 + 0.137 * spread, 1000),
                                    rationalize(bottom - spread, 1000));
    }
    Complex b = to_complex(act.basepoint);
    for (int k : loop.loci) {
      Complex p = pts[k];
      double rho = 0.4 * std::abs(b - p);
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (static_cast<int>(j) != k) rho = std::min(rho, 0.4 * std::abs(pts[j] - p));
      Complex q = p + (b - p) / std::abs(b - p) * rho;
      for (std::size_t j = 0; j < pts.size(); ++j)
        if (static_cast<int>(j) != k && dist_to_segment(pts[j], b, q) < 0.05 * rho)
          throw Error(ErrorKind::PathTooCloseToLocus,
                      "lasso to locus " + std::to_string(k + 1) + " passes near locus " +
                          std::to_string(j + 1) + "; choose another basepoint");
      Piece in{false, b, q, {}, 0, 0, 0};
      Piece arc;
      arc.arc = true;
      arc.c = p;
      arc.r = rho;
      arc.t0 = std::arg(q - p);
      arc.t1 = arc.t0 + 2 * M_PI;
      Piece out{false, q, b, {}, 0, 0, 0};
      pieces.push_back(in);
      pieces.push_back(arc);
      pieces.push_back(out);
    }
  }
  if (loop.reversed) {
    std::reverse(pieces.begin(), pieces.end());
    for (auto& p : pieces) {
      std::swap(p.a, p.b);
      std::swap(p.t0, p.t1);
    }
  }
  if (evaluate(to_ext(f.resultant()), act.basepoint).is_zero())
    throw Error(ErrorKind::PreconditionViolated, "basepoint " + act.basepoint.str() + " lies on the branch locus");

  Complex b = to_complex(act.basepoint);
  Tracker tr{f, opts};
  std::vector<Complex> start = numeric_roots(f.at(b));
  auto cb = f.at(b);
  for (auto& y : start) tr.newton(cb, y);
  std::sort(start.begin(), start.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  act.start_roots = start;
  std::vector<Complex> ys = start;
  for (const auto& p : pieces) tr.follow(p, ys);
  act.steps = tr.steps;
  const std::size_t d = start.size();
  act.permutation.assign(d, -1);
  act.separation = d > 1 ? Tracker::min_sep(start) : INFINITY;
  std::vector<bool> used(d);
  for (std::size_t k = 0; k < d; ++k) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < d; ++j)
      if (std::abs(ys[k] - start[j]) < std::abs(ys[k] - start[best])) best = j;
    act.residual = std::max(act.residual, std::abs(ys[k] - start[best]));
    if (used[best]) throw Error(ErrorKind::AmbiguousMatching, "two branches end at the same root");
    used[best] = true;
    act.permutation[k] = static_cast<int>(best);
  }
  if (act.separation < 10 * act.residual)
    throw Error(ErrorKind::AmbiguousMatching, "endpoint roots are not separated by 10x the residual");
  return act;
}

BranchLocus branch_locus(const AlgebraicFunction& f) {
  BranchLocus bl;
  bl.points = isolate_roots(f.resultant() * f.leading());
  try {
    for (const auto& s : newton_puiseux(f, Center::at_infinity(), 1))
      if (s.ramification > 1) bl.includes_infinity = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnsupportedCoefficientField) throw;
    double reach = 1;
    for (const auto& p : bl.points) reach = std::max(reach, std::abs(p.approx));
    Loop big;
    big.radius = rationalize(2 * reach + 1, 1);
    auto act = monodromy(f, big, bl);
    for (std::size_t k = 0; k < act.permutation.size(); ++k)
      if (act.permutation[k] != static_cast<int>(k)) bl.includes_infinity = true;
  }
  return bl;
}

// ---------------------------------------------------------------------------
// Classification

std::string_view to_string(BranchingClass::Kind k) {
  switch (k) {
    case BranchingClass::Kind::NonBranching: return "NonBranching";
    case BranchingClass::Kind::SimpleCyclic: return "SimpleCyclic";
    case BranchingClass::Kind::NonCyclic: return "NonCyclic";
    case BranchingClass::Kind::Inconclusive: return "TruncationInconclusive";
  }
  return "?";
}

namespace {

int positive_mod(long a, long n) { return static_cast<int>(((a % n) + n) % n); }

// F(zeta T, zeta^rho Y) = zeta^kappa F(T, Y) for zeta^n = 1.
bool quasi_homogeneous(const LocalPoly& f, int rho, int n) {
  std::optional<int> kappa;
  for (const auto& [key, c] : f) {
    int k = positive_mod(key.first + static_cast<long>(rho) * key.second, n);
    if (!kappa) kappa = k;
    else if (*kappa != k) return false;
  }
  return true;
}

}  // namespace

BranchingClass classify_branching(const AlgebraicFunction& f, const Center& c, int terms) {
  BranchingClass out;
  auto cycles = expand_cycles(f, c, terms);
  bool any_ramified = false, non_cyclic = false, inconclusive = false;
  long period = 1;
  for (const auto& cy : cycles) {
    const auto& s = cy.series;
    CycleClass cc;
    cc.ramification = s.ramification;
    cc.leading_index = s.leading_index();
    if (s.ramification == 1) {
      cc.period = 1;
      cc.proven = true;
      out.cycles.push_back(cc);
      continue;
    }
    any_ramified = true;
    const int n = s.ramification, i0 = s.leading_index();
    for (const auto& [i, a] : s.terms)
      if (positive_mod(i - i0, n) != 0) {
        cc.witness_index = i;
        break;
      }
    if (cc.witness_index) {
      cc.proven = true;
      non_cyclic = true;
    } else {
      cc.period = n / std::gcd(std::abs(i0), n);
      if (s.exact) cc.proven = true;
      else if (cy.tail) cc.proven = quasi_homogeneous(*cy.tail, positive_mod(i0 - cy.tail_w, n), n);
      if (cc.proven) period = std::lcm(period, static_cast<long>(cc.period));
      else inconclusive = true;
    }
    out.cycles.push_back(cc);
  }
  using K = BranchingClass::Kind;
  if (!any_ramified) out.kind = K::NonBranching;
  else if (non_cyclic) out.kind = K::NonCyclic;
  else if (inconclusive) out.kind = K::Inconclusive;
  else {
    out.kind = K::SimpleCyclic;
    out.period = static_cast<int>(period);
  }
  return out;
}

LeadingCoeffReport leading_coeff_check(const AlgebraicFunction& f, const Rational& radius) {
  LeadingCoeffReport rep;
  rep.radius = radius;
  const UPoly& lc = f.leading();
  rep.normalizable = lc.degree() == 0;
  if (!rep.normalizable) {
    rep.unbounded_near = isolate_roots(lc);
    return rep;
  }
  // Cauchy: every root has |Y| <= 1 + max_k |a_k(z) / lc|.
  Rational worst = 0;
  for (int j = 0; j < f.degree(); ++j) {
    Rational m = 0, rp = 1;
    for (const auto& c : f.coeff(j).coeffs()) {
      m += abs(c) * rp;
      rp *= radius;
    }
    worst = std::max(worst, m / abs(lc[0]));
  }
  rep.bound = 1 + worst;
  return rep;
}

BranchRelation derive_branch_relation(const std::vector<int>& leading_exponents, int n0,
                                      const std::vector<QModReal>& weights, RefineOptions opts) {
  if (weights.empty() || leading_exponents.size() + 1 != weights.size())
    throw Error(ErrorKind::PreconditionViolated, "need k weights and k-1 leading exponents");
  if (n0 <= 0) throw Error(ErrorKind::PreconditionViolated, "ramification index must be positive");
  for (const auto& w : weights)
    if (qmod_sign(w, opts) != Sign::Positive)
      throw Error(ErrorKind::NonPositiveEntry, "weight " + w.str() + " is not positive");
  BranchRelation rel;
  rel.n1 = n0;
  QModReal residual = Rational(n0) * weights[0];
  for (std::size_t a = 0; a < leading_exponents.size(); ++a) {
    rel.n.push_back(-static_cast<long>(leading_exponents[a]));
    residual = residual - Rational(rel.n.back()) * weights[a + 1];
  }
  rel.residual = residual;
  rel.holds = qmod_sign(residual, opts) == Sign::Zero;
  return rel;
}

}  // namespace isokit
