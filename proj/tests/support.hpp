#pragma once

// Generators and independent oracles shared by the unit tests and the
// acceptance binary. Nothing here calls into the code under test except to
// build inputs.

#include "isokit/hermitian.hpp"
#include "isokit/scalar.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace testkit {

using isokit::BasisPtr;
using isokit::PolarizedPoly;
using isokit::QModReal;
using isokit::Rational;

struct Rng {
  explicit Rng(std::uint64_t seed) : g(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(g); }
  Rational rational(int num_max, int den_max) { return Rational(uniform(-num_max, num_max), uniform(1, den_max)); }
  std::mt19937_64 g;
};

inline BasisPtr sqrt2_basis() {
  static const BasisPtr b = [] {
    std::vector<Rational> q{2};
    return isokit::QBasis::with_sqrts(q);
  }();
  return b;
}

inline QModReal over_sqrt2(const Rational& a, const Rational& b) { return QModReal(sqrt2_basis(), {a, b}); }

inline double approx(const QModReal& x) {
  double v = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double e = 1;
    const auto& r = (*x.basis())[i].refiner;
    if (r.kind == isokit::Refiner::Kind::Sqrt) e = std::sqrt(isokit::to_double(r.radicand));
    v += isokit::to_double(x[i]) * e;
  }
  return v;
}

// Exact sign of a + b*sqrt(2) by squaring, independent of interval refinement.
inline int sign_sqrt2(const Rational& a, const Rational& b) {
  int sa = a.sign(), sb = b.sign();
  if (sa >= 0 && sb >= 0) return (sa > 0 || sb > 0) ? 1 : 0;
  if (sa <= 0 && sb <= 0) return -1;
  // opposite signs: compare a^2 with 2 b^2
  Rational lhs = a * a, rhs = 2 * b * b;
  if (lhs == rhs) return 0;
  return (lhs > rhs) == (sa > 0) ? 1 : -1;
}

inline int sign_of(const QModReal& x) { return sign_sqrt2(x[0], x[1]); }

// Positive a + b*sqrt(2) with |numerators| <= num_max, denominators <= den_max.
inline QModReal random_positive(Rng& rng, int num_max = 8, int den_max = 4) {
  for (;;) {
    Rational a = rng.rational(num_max, den_max), b = rng.rational(num_max, den_max);
    if (sign_sqrt2(a, b) > 0) return over_sqrt2(a, b);
  }
}

// Searches c, d >= 0 with entries k/den (k <= den), not all zero, such that
// sum c_j lambda_j = sum d_l mu_l. Coordinates over {1, sqrt 2} are compared
// directly.
inline bool brute_force_cone_witness(const std::vector<QModReal>& lambda, const std::vector<QModReal>& mu,
                                     int den = 4) {
  using Key = std::pair<Rational, Rational>;
  auto sums = [&](const std::vector<QModReal>& v) {
    std::vector<Key> out;
    std::vector<int> k(v.size(), 0);
    for (;;) {
      bool any = false;
      Rational a = 0, b = 0;
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (k[i]) any = true;
        a += Rational(k[i], den) * v[i][0];
        b += Rational(k[i], den) * v[i][1];
      }
      if (any) out.push_back({a, b});
      std::size_t i = 0;
      while (i < k.size() && ++k[i] > den) k[i++] = 0;
      if (i == k.size()) break;
    }
    return out;
  };
  auto left = sums(lambda), right = sums(mu);
  for (const auto& l : left)
    for (const auto& r : right)
      if (l == r) return true;
  return false;
}

// binomial(a, k) by the falling-factorial product.
inline Rational binomial_oracle(const Rational& a, int k) {
  Rational num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= a - i;
    den *= i + 1;
  }
  return num / den;
}

// Symmetric polarized polynomial with up to `terms` monomial pairs and a
// positive constant term.
inline PolarizedPoly random_hermitian_poly(Rng& rng, int n, int terms, int max_deg = 2) {
  PolarizedPoly p;
  p[std::vector<int>(2 * n, 0)] = Rational(rng.uniform(1, 4));
  for (int t = 1; t < terms; ++t) {
    std::vector<int> a(n), b(n);
    int da = 0, db = 0;
    for (int i = 0; i < n; ++i) {
      a[i] = rng.uniform(0, 1);
      b[i] = rng.uniform(0, 1);
      da += a[i];
      db += b[i];
    }
    if (da == 0 && db == 0) a[rng.uniform(0, n - 1)] = 1;
    if (da > max_deg || db > max_deg) continue;
    Rational c(rng.uniform(1, 3), rng.uniform(1, 2));
    std::vector<int> e = a, f = b;
    e.insert(e.end(), b.begin(), b.end());
    f.insert(f.end(), a.begin(), a.end());
    p[e] += c;
    if (e != f) p[f] += c;
  }
  return p;
}

inline PolarizedPoly scale(const PolarizedPoly& p, const Rational& c) {
  PolarizedPoly out;
  for (const auto& [e, v] : p) out[e] = c * v;
  return out;
}

// Naive dense product, independent of the library's poly_mul.
inline PolarizedPoly naive_mul(const PolarizedPoly& a, const PolarizedPoly& b) {
  PolarizedPoly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out[e] += ca * cb;
    }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

inline PolarizedPoly naive_pow(const PolarizedPoly& p, int k) {
  PolarizedPoly out{{std::vector<int>(p.begin()->first.size(), 0), Rational(1)}};
  for (int i = 0; i < k; ++i) out = naive_mul(out, p);
  return out;
}

}  // namespace testkit
