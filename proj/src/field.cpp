#include "isokit/field.hpp"

#include "isokit/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isokit {

namespace {
[[noreturn]] void unsupported(const std::string& what) {
  throw Error(ErrorKind::UnsupportedCoefficientField, what);
}
}  // namespace

Ext::Ext(Rational a, Rational b, Rational c, Rational d, Rational s)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), s_(std::move(s)) {
  if ((b_ != 0 || d_ != 0) && s_ <= 0)
    throw Error(ErrorKind::InvalidArgument, "square-root part needs a positive radicand");
  normalize();
}

Ext Ext::i() { return Ext(0, 0, 1, 0, 0); }

void Ext::normalize() {
  if (s_ != 0) {
    if (auto r = rational_sqrt(s_)) {
      a_ += b_ * *r;
      c_ += d_ * *r;
      b_ = d_ = 0;
    }
  }
  if (b_ == 0 && d_ == 0) s_ = 0;
}

void Ext::unify(Ext& x, Ext& y) {
  if (x.s_ == y.s_) return;
  if (x.s_ == 0) {
    x.s_ = y.s_;
    return;
  }
  if (y.s_ == 0) {
    y.s_ = x.s_;
    return;
  }
  auto k = rational_sqrt(y.s_ / x.s_);
  if (!k)
    unsupported("values from Q(i, sqrt(" + to_string(x.s_) + ")) and Q(i, sqrt(" +
                to_string(y.s_) + ")) cannot be combined");
  y.b_ *= *k;
  y.d_ *= *k;
  y.s_ = x.s_;
}

Complex Ext::approx() const {
  double rs = s_ == 0 ? 0.0 : std::sqrt(to_double(s_));
  return {to_double(a_) + to_double(b_) * rs, to_double(c_) + to_double(d_) * rs};
}

Ext& Ext::operator+=(const Ext& o) {
  Ext y = o;
  unify(*this, y);
  a_ += y.a_;
  b_ += y.b_;
  c_ += y.c_;
  d_ += y.d_;
  normalize();
  return *this;
}

Ext& Ext::operator-=(const Ext& o) { return *this += -o; }

Ext& Ext::operator*=(const Ext& o) {
  Ext y = o;
  unify(*this, y);
  const Rational& s = s_;
  // (p1 + q1 r)(p2 + q2 r) with r = sqrt(s)
  auto mul = [&](const Rational& p1, const Rational& q1, const Rational& p2, const Rational& q2) {
    return std::pair<Rational, Rational>{p1 * p2 + s * q1 * q2, p1 * q2 + q1 * p2};
  };
  auto [rr1, rr2] = mul(a_, b_, y.a_, y.b_);
  auto [ii1, ii2] = mul(c_, d_, y.c_, y.d_);
  auto [ri1, ri2] = mul(a_, b_, y.c_, y.d_);
  auto [ir1, ir2] = mul(c_, d_, y.a_, y.b_);
  a_ = rr1 - ii1;
  b_ = rr2 - ii2;
  c_ = ri1 + ir1;
  d_ = ri2 + ir2;
  normalize();
  return *this;
}

Ext Ext::inverse() const {
  if (is_zero()) throw Error(ErrorKind::InvalidArgument, "division by zero in coefficient field");
  // 1/x = conj(x) / |x|^2, |x|^2 = n1 + n2 sqrt(s), 1/(n1 + n2 r) = (n1 - n2 r)/(n1^2 - s n2^2)
  Ext norm = *this * conj();
  Rational n1 = norm.a_, n2 = norm.b_;
  Rational den = n1 * n1 - norm.s_ * n2 * n2;
  Ext inv_norm(n1 / den, -n2 / den, 0, 0, norm.s_);
  return conj() * inv_norm;
}

Ext& Ext::operator/=(const Ext& o) { return *this *= o.inverse(); }

bool operator==(const Ext& x, const Ext& y) { return (x - y).is_zero(); }

Ext Ext::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  Ext result(1), base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

std::string Ext::str() const {
  auto part = [&](const Rational& p, const Rational& q) {
    std::ostringstream os;
    if (q == 0) {
      os << to_string(p);
    } else {
      std::string root = "sqrt(" + to_string(s_) + ")";
      std::string qs = q == 1 ? root : q == -1 ? "-" + root : to_string(q) + "*" + root;
      if (p == 0) os << qs;
      else os << to_string(p) << (q < 0 ? " - " : " + ")
              << (abs(q) == 1 ? root : to_string(abs(q)) + "*" + root);
    }
    return os.str();
  };
  bool has_re = a_ != 0 || b_ != 0, has_im = c_ != 0 || d_ != 0;
  if (!has_im) return part(a_, b_);
  std::string im;
  if (d_ == 0 && abs(c_) == 1) im = c_ < 0 ? "-i" : "i";
  else if (b_ == 0 && d_ == 0) im = to_string(c_) + "*i";
  else if (c_ == 0) im = part(0, d_) + "*i";
  else im = "(" + part(c_, d_) + ")*i";
  if (!has_re) return im;
  std::string re = part(a_, b_);
  if (im[0] == '-') return re + " - " + im.substr(1);
  return re + " + " + im;
}

int real_sign(const Rational& a, const Rational& b, const Rational& s) {
  int sa = a.sign(), sb = b.sign();
  if (sb == 0 || s == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // opposite signs: compare a^2 with s b^2
  int cmp = (a * a - s * b * b).sign();
  return sa > 0 ? cmp : -cmp;
}

namespace {

std::optional<Ext> real_sqrt(const Ext& x) {
  // x = a + b sqrt(s) >= 0 with b != 0: look for (p + q sqrt(s))^2.
  const Rational &a = x.a(), &b = x.b(), &s = x.s();
  auto n = rational_sqrt(a * a - s * b * b);
  if (!n) return std::nullopt;
  for (const Rational& half : {(a + *n) / 2, (a - *n) / 2}) {
    if (half <= 0) continue;
    auto p = rational_sqrt(half);
    if (!p) continue;
    Ext cand(*p, b / (2 * *p), 0, 0, s);
    if (cand * cand == x) return cand;
  }
  // (q sqrt(s))^2 = s q^2 is rational, so b != 0 rules it out.
  return std::nullopt;
}

// r = k^2 t with t an integer free of small square factors.
std::pair<Rational, Integer> split_square(const Rational& r) {
  Integer t = numer(r) * denom(r);
  Rational k = Rational(1) / Rational(denom(r));
  Integer out = 1;
  for (long p = 2; p <= 10000 && p * p <= t; ++p) {
    Integer pp = Integer(p) * p;
    while (t % pp == 0) {
      t /= pp;
      out *= p;
    }
  }
  return {k * Rational(out), t};
}

}  // namespace

Ext field_sqrt(const Ext& x) {
  if (x.is_zero()) return Ext(0);
  if (x.is_rational()) {
    const Rational& r = x.a();
    if (r < 0) return Ext::i() * field_sqrt(Ext(Rational(-r)));
    if (auto q = rational_sqrt(r)) return Ext(*q);
    auto [k, t] = split_square(r);
    return Ext(0, k, 0, 0, Rational(t));
  }
  if (x.is_real()) {
    int sg = real_sign(x.a(), x.b(), x.s());
    if (sg > 0) {
      if (auto r = real_sqrt(x)) return *r;
    } else {
      if (auto r = real_sqrt(-x)) return Ext::i() * *r;
    }
    unsupported("square root of " + x.str() + " leaves Q(i, sqrt(" + to_string(x.s()) + "))");
  }
  // (p + i q)^2 = alpha + i beta with p, q real.
  Ext alpha = x.real(), beta = x.imag();
  Ext modulus = field_sqrt(alpha * alpha + beta * beta);
  if (!modulus.is_real()) unsupported("modulus of " + x.str() + " is not real in the field");
  if (real_sign(modulus.a(), modulus.b(), modulus.s()) < 0) modulus = -modulus;
  Ext p = field_sqrt((alpha + modulus) / Ext(2));
  if (!p.is_real() || p.is_zero()) unsupported("square root of " + x.str());
  Ext q = beta / (Ext(2) * p);
  Ext r = p + Ext::i() * q;
  if (!(r * r == x)) unsupported("square root of " + x.str());
  return r;
}

namespace {

std::optional<Integer> integer_root(const Integer& n, int k) {
  if (n < 0) return std::nullopt;
  double guess = std::pow(n.convert_to<double>(), 1.0 / k);
  for (long long g = static_cast<long long>(std::llround(guess)) - 1;
       g <= static_cast<long long>(std::llround(guess)) + 1; ++g) {
    if (g < 0) continue;
    Integer p = boost::multiprecision::pow(Integer(g), static_cast<unsigned>(k));
    if (p == n) return Integer(g);
  }
  return std::nullopt;
}

}  // namespace

Ext field_root(const Ext& x, int k) {
  if (k <= 0) throw Error(ErrorKind::InvalidArgument, "root index must be positive");
  if (k == 1 || x.is_zero()) return x;
  if (k % 2 == 0) return field_root(field_sqrt(x), k / 2);
  if (x.is_rational()) {
    Rational r = x.a();
    bool neg = r < 0;
    Rational m = neg ? Rational(-r) : r;
    auto n = integer_root(numer(m), k), d = integer_root(denom(m), k);
    if (n && d) return Ext(neg ? Rational(-*n, *d) : Rational(*n, *d));
  }
  // Numeric proposal among Gaussian rationals, verified exactly.
  Complex z = x.approx();
  double mag = std::pow(std::abs(z), 1.0 / k), ang = std::arg(z) / k;
  for (int j = 0; j < k; ++j) {
    double t = ang + 2 * M_PI * j / k;
    Ext cand = Ext::gaussian(rationalize(mag * std::cos(t), 1000000),
                             rationalize(mag * std::sin(t), 1000000));
    if (cand.pow(k) == x) return cand;
  }
  unsupported(std::to_string(k) + "-th root of " + x.str() + " is not in the supported field");
}

Ext root_of_unity(int k) {
  switch (k) {
    case 1: return Ext(1);
    case 2: return Ext(-1);
    case 4: return Ext::i();
    case 3: return Ext(Rational(-1, 2), 0, 0, Rational(1, 2), 3);
    case 6: return Ext(Rational(1, 2), 0, 0, Rational(1, 2), 3);
    default: unsupported("primitive " + std::to_string(k) + "-th roots of unity");
  }
}

ExtPoly to_ext(const UPoly& p) {
  ExtPoly r;
  for (const auto& c : p.coeffs()) r.emplace_back(c);
  return r;
}

void trim(ExtPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Ext evaluate(const ExtPoly& p, const Ext& x) {
  Ext acc(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

namespace {

ExtPoly mul(const ExtPoly& a, const ExtPoly& b) {
  if (a.empty() || b.empty()) return {};
  ExtPoly r(a.size() + b.size() - 1, Ext(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

ExtPoly apply(const ExtPoly& p, bool flip_i, bool flip_root) {
  ExtPoly r;
  for (const auto& c : p)
    r.emplace_back(c.a(), flip_root ? Rational(-c.b()) : c.b(), flip_i ? Rational(-c.c()) : c.c(),
                   (flip_i != flip_root) ? Rational(-c.d()) : c.d(), c.s());
  return r;
}

// Divides p by (x - r) once if r is a root.
bool deflate(ExtPoly& p, const Ext& r) {
  if (p.size() < 2) return false;
  ExtPoly q(p.size() - 1, Ext(0));
  Ext carry(0);
  for (std::size_t k = p.size(); k-- > 1;) {
    carry = carry * r + p[k];
    q[k - 1] = carry;
  }
  Ext rem = carry * r + p[0];
  if (!rem.is_zero()) return false;
  p = std::move(q);
  return true;
}

void push_quadratic_roots(const Rational& b, const Rational& c, std::vector<Ext>& out) {
  // x^2 + b x + c
  Ext disc(b * b - 4 * c);
  try {
    Ext root = field_sqrt(disc);
    out.push_back((Ext(-b) + root) / Ext(2));
    out.push_back((Ext(-b) - root) / Ext(2));
  } catch (const Error&) {
  }
}

}  // namespace

std::vector<std::pair<Ext, int>> field_roots(const ExtPoly& p_in) {
  ExtPoly p = p_in;
  trim(p);
  const int n = static_cast<int>(p.size()) - 1;
  if (n <= 0) return {};
  // Norm polynomial: product over the field automorphisms, rational.
  ExtPoly norm = p;
  bool rational = std::all_of(p.begin(), p.end(), [](const Ext& c) { return c.is_rational(); });
  if (!rational) {
    bool has_root = std::any_of(p.begin(), p.end(), [](const Ext& c) { return c.s() != 0; });
    norm = mul(p, apply(p, true, false));
    if (has_root) norm = mul(norm, mul(apply(p, false, true), apply(p, true, true)));
  }
  std::vector<Rational> rc;
  for (const auto& c : norm) {
    if (!c.is_rational()) throw Error(ErrorKind::Internal, "norm polynomial is not rational");
    rc.push_back(c.a());
  }
  UPoly R(rc);
  std::vector<Ext> cands;
  for (const auto& r : rational_roots(R)) cands.emplace_back(r);
  // Remove rational roots, then look for quadratic factors over Q.
  UPoly rest = squarefree_part(R);
  for (const auto& r : rational_roots(rest)) rest = divmod(rest, UPoly({-r, Rational(1)})).first;
  while (rest.degree() >= 2) {
    if (rest.degree() == 2) {
      UPoly m = rest.monic();
      push_quadratic_roots(m[1], m[0], cands);
      break;
    }
    auto zs = numeric_roots(rest);
    bool split = false;
    for (std::size_t i = 0; i < zs.size() && !split; ++i)
      for (std::size_t j = i + 1; j < zs.size() && !split; ++j) {
        Complex s = zs[i] + zs[j], pr = zs[i] * zs[j];
        if (std::abs(s.imag()) > 1e-6 || std::abs(pr.imag()) > 1e-6) continue;
        UPoly quad({rationalize(pr.real(), 1000000), rationalize(-s.real(), 1000000), Rational(1)});
        auto [q, r] = divmod(rest, quad);
        if (!r.is_zero()) continue;
        push_quadratic_roots(quad[1], quad[0], cands);
        rest = q;
        split = true;
      }
    if (!split) break;
  }
  std::vector<std::pair<Ext, int>> out;
  int found = 0;
  for (const auto& c : cands) {
    int mult = 0;
    try {
      while (deflate(p, c)) ++mult;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnsupportedCoefficientField) throw;
    }
    if (mult > 0) {
      out.emplace_back(c, mult);
      found += mult;
    }
  }
  if (found != n)
    unsupported("only " + std::to_string(found) + " of " + std::to_string(n) +
                " roots of a characteristic polynomial lie in the supported field");
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    Complex a = x.first.approx(), b = y.first.approx();
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

}  // namespace isokit
