#include "isokit/upoly.hpp"

#include "isokit/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isokit {

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly UPoly::monomial(const Rational& c, int k) {
  std::vector<Rational> v(k + 1);
  v[k] = c;
  return UPoly(std::move(v));
}

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UPoly::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Complex UPoly::operator()(Complex x) const {
  Complex acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + to_double(*it);
  return acc;
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<Rational> d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<long>(k);
  return UPoly(std::move(d));
}

UPoly UPoly::monic() const {
  if (c_.empty()) return {};
  return (Rational(1) / leading()) * *this;
}

UPoly UPoly::shifted(const Rational& c) const {
  // Horner in the polynomial ring: p(x + c).
  UPoly acc;
  UPoly lin(std::vector<Rational>{c, 1});
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * lin + UPoly({*it});
  return acc;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  std::vector<Rational> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
  return UPoly(std::move(r));
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + Rational(-1) * b; }

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return UPoly(std::move(r));
}

UPoly operator*(const Rational& k, const UPoly& a) {
  std::vector<Rational> r = a.c_;
  for (auto& x : r) x *= k;
  return UPoly(std::move(r));
}

std::string UPoly::str(const char* var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int k = degree(); k >= 0; --k) {
    const Rational& c = c_[k];
    if (c == 0) continue;
    Rational a = abs(c);
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    first = false;
    if (k == 0 || a != 1) {
      os << to_string(a);
      if (k > 0) os << "*";
    }
    if (k > 0) os << var;
    if (k > 1) os << "^" << k;
  }
  return os.str();
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
  std::vector<Rational> rem = a.coeffs();
  int db = b.degree();
  if (a.degree() < db) return {UPoly(), a};
  std::vector<Rational> q(a.degree() - db + 1);
  for (int k = a.degree(); k >= db; --k) {
    Rational f = rem[k] / b.leading();
    q[k - db] = f;
    if (f == 0) continue;
    for (int j = 0; j <= db; ++j) rem[k - db + j] -= f * b[j];
  }
  return {UPoly(std::move(q)), UPoly(std::move(rem))};
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly r = divmod(x, y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

UPoly squarefree_part(const UPoly& p) {
  if (p.degree() <= 0) return p.monic();
  return divmod(p, gcd(p, p.derivative())).first.monic();
}

std::vector<Complex> numeric_roots(const std::vector<Complex>& coeffs_in) {
  std::vector<Complex> c = coeffs_in;
  while (!c.empty() && c.back() == Complex(0)) c.pop_back();
  const int n = static_cast<int>(c.size()) - 1;
  if (n <= 0) return {};
  // Leading zeros (roots at 0) handled by deflation.
  int zeros = 0;
  while (zeros < n && c[zeros] == Complex(0)) ++zeros;
  std::vector<Complex> out(zeros, Complex(0));
  std::vector<Complex> p(c.begin() + zeros, c.end());
  const int m = static_cast<int>(p.size()) - 1;
  if (m == 0) return out;
  using LC = std::complex<long double>;
  std::vector<LC> a(p.begin(), p.end());
  for (auto& x : a) x /= LC(p.back());
  long double radius = 0;
  for (int k = 0; k < m; ++k) radius = std::max(radius, std::abs(a[k]));
  radius = 1 + radius;
  std::vector<LC> z(m);
  for (int k = 0; k < m; ++k) {
    long double ang = 2.0L * M_PIl * k / m + 0.4L;
    z[k] = LC(std::cos(ang), std::sin(ang)) * (0.5L * radius);
  }
  auto eval = [&](LC x, LC& d) {
    LC v = a[m], dv = 0;
    for (int k = m - 1; k >= 0; --k) {
      dv = dv * x + v;
      v = v * x + a[k];
    }
    d = dv;
    return v;
  };
  for (int it = 0; it < 500; ++it) {
    long double worst = 0;
    for (int k = 0; k < m; ++k) {
      LC d;
      LC v = eval(z[k], d);
      if (v == LC(0)) continue;
      LC ratio = v / d;
      LC sum = 0;
      for (int j = 0; j < m; ++j)
        if (j != k) sum += LC(1) / (z[k] - z[j]);
      LC step = ratio / (LC(1) - ratio * sum);
      if (!std::isfinite(std::abs(step))) step = ratio;
      z[k] -= step;
      worst = std::max(worst, std::abs(step) / (1 + std::abs(z[k])));
    }
    if (worst < 1e-18L) break;
  }
  for (auto& x : z) out.emplace_back(static_cast<double>(x.real()), static_cast<double>(x.imag()));
  return out;
}

std::vector<Complex> numeric_roots(const UPoly& p) {
  std::vector<Complex> c;
  for (const auto& x : p.coeffs()) c.emplace_back(to_double(x), 0.0);
  return numeric_roots(c);
}

std::vector<Rational> rational_roots(const UPoly& p) {
  if (p.degree() <= 0) return {};
  UPoly s = squarefree_part(p);
  // Clear denominators: integer polynomial with leading coefficient L. Every
  // rational root has the form k / L for an integer k.
  Integer l = 1;
  for (const auto& c : s.coeffs()) l = boost::multiprecision::lcm(l, denom(c));
  Rational lead = s.leading() * Rational(l);
  std::vector<Rational> out;
  if (s[0] == 0) out.push_back(0);
  for (const auto& z : numeric_roots(s)) {
    if (std::abs(z.imag()) > 1e-6 * (1 + std::abs(z.real()))) continue;
    double scaled = z.real() * to_double(lead);
    if (!std::isfinite(scaled) || std::abs(scaled) > 1e17) continue;
    Rational cand = Rational(Integer(static_cast<long long>(std::llround(scaled)))) / lead;
    if (s(cand) == 0 && std::find(out.begin(), out.end(), cand) == out.end()) out.push_back(cand);
  }
  std::sort(out.begin(), out.end());
  return out;
}

UPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  // Newton divided differences.
  const std::size_t n = xs.size();
  std::vector<Rational> dd = ys;
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  UPoly acc({dd[n - 1]});
  for (std::size_t k = n - 1; k-- > 0;) acc = acc * UPoly({-xs[k], Rational(1)}) + UPoly({dd[k]});
  return acc;
}

}  // namespace isokit
