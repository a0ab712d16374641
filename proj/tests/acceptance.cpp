// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include "support.hpp"

#include "isokit/conformal.hpp"
#include "isokit/error.hpp"
#include "isokit/expr.hpp"
#include "isokit/hermitian.hpp"
#include "isokit/puiseux.hpp"
#include "isokit/series.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

using namespace isokit;
using testkit::over_sqrt2;

namespace {

struct Check {
  bool ok = true;
  std::ostringstream why;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why << what;
    ok = ok && cond;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

long binom(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

// (1 + sum z_i xi_i)^k expanded by the multinomial theorem.
PolarizedPoly fubini_study_power(int n, int k) {
  PolarizedPoly out;
  std::vector<int> a(n, 0);
  std::function<void(int, int)> rec = [&](int i, int left) {
    if (i == n) {
      long den = factorial(left);
      for (int x : a) den *= factorial(x);
      std::vector<int> e = a;
      e.insert(e.end(), a.begin(), a.end());
      out[e] = Rational(factorial(k), den);
      return;
    }
    for (int x = 0; x <= left; ++x) {
      a[i] = x;
      rec(i + 1, left - x);
    }
    a[i] = 0;
  };
  rec(0, k);
  return out;
}

void veronese_isometry(Check& c) {
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= 4; ++k) {
      std::string tag = "n=" + std::to_string(n) + " k=" + std::to_string(k) + ": ";
      MapTuple v = veronese(n, k);
      HermitianForm got = form_from_map(v);
      HermitianForm want = HermitianForm::from_poly(n, fubini_study_power(n, k));
      c.expect(got == want, tag + "form differs from (1+|z|^2)^k");
      PolarizedPoly diff = got.to_poly();
      for (const auto& [e, x] : want.to_poly()) diff[e] -= x;
      c.expect(std::all_of(diff.begin(), diff.end(), [](const auto& kv) { return kv.second == 0; }),
               tag + "nonzero residual");
      long count = static_cast<long>(v.dimension());
      c.expect(count == binom(n + k, k) - 1, tag + "component count");
      if (k == 2) c.expect(count == n * (n + 3) / 2, tag + "component count n(n+3)/2");
    }
}

std::set<FactorSolution> enumerate(const ConformalData& d, int bound) {
  std::set<FactorSolution> out;
  const std::size_t k = d.mu.size(), v = d.lambda.size();
  std::vector<int> x(k + v, 1);
  for (;;) {
    QModReal s = d.r;
    for (std::size_t l = 0; l < k; ++l) s = s - Rational(x[l]) * d.mu[l];
    for (std::size_t j = 0; j < v; ++j) s = s + Rational(x[k + j]) * d.lambda[j];
    if (s.is_zero()) out.insert({{x.begin(), x.begin() + k}, {x.begin() + k, x.end()}});
    std::size_t i = 0;
    while (i < x.size() && ++x[i] > bound) x[i++] = 1;
    if (i == x.size()) break;
  }
  return out;
}

void worked_example(Check& c) {
  BasisPtr b = testkit::sqrt2_basis();
  std::vector<QModReal> mu{over_sqrt2(Rational(1, 4), 1), over_sqrt2(Rational(1, 4), 0)};
  std::vector<QModReal> lambda{over_sqrt2(0, 1)};
  ConformalData d{b, mu, lambda, QModReal::rational(b, 1)};
  d.validate();
  c.expect(cone_condition(d).holds, "cone condition reported Violated");

  auto sols = solve_factor_equation(d, 5);
  std::set<FactorSolution> got(sols.begin(), sols.end());
  std::set<FactorSolution> want{{{1, 3}, {1}}, {{2, 2}, {2}}, {{3, 1}, {3}}};
  c.expect(got == want, "solution set differs from the listed triples");
  c.expect(got == enumerate(d, 5), "solution set differs from enumeration");

  for (const auto& s : want) {
    Example62Input in;
    in.mu = mu;
    in.lambda = lambda;
    in.m = s.m;
    in.n = s.n;
    in.m_prime = {0, 0};
    in.n_prime = {0};
    in.f = MapTuple(1, {});
    IdentityInstance inst = example62_construct(in);
    c.expect(all_zero(weighted_log_residual(inst.to_series(10))), "construct residual nonzero at D=10");
  }
}

PolarizedSeries fubini_study_series(const Rational& a, int order) {
  PolarizedSeries s(1, order);
  s.add({1, 1}, 1);
  return series_binomial_pow(s, a, order);
}

void calabi(Check& c) {
  struct Case {
    Rational a;
    int order;
    int k;  // failing |z|^{2k}
  };
  for (const Case& cs : {Case{Rational(1, 2), 4, 2}, Case{Rational(5, 2), 8, 4}}) {
    std::string tag = "a=" + to_string(cs.a) + ": ";
    PolarizedSeries s = fubini_study_series(cs.a, cs.order);
    for (int j = 0; 2 * j <= cs.order; ++j)
      c.expect(s.coeff({j, j}) == testkit::binomial_oracle(cs.a, j), tag + "series coefficient");
    ResolvableResult r = resolvable_check(s, cs.order);
    c.expect(!r.resolvable, tag + "accepted");
    c.expect(r.fail_value == testkit::binomial_oracle(cs.a, cs.k), tag + "certificate value " + to_string(r.fail_value));
    c.expect(r.fail_z == Monomial{cs.k} && r.fail_xi == Monomial{cs.k}, tag + "certificate location");
  }
  c.expect(testkit::binomial_oracle(Rational(1, 2), 2) == Rational(-1, 8), "oracle value -1/8");
  c.expect(testkit::binomial_oracle(Rational(5, 2), 4) == Rational(-5, 128), "oracle value -5/128");

  for (int k = 1; k <= 6; ++k) {
    HermitianForm P = HermitianForm::from_poly(1, fubini_study_power(1, k));
    ResolvableResult r = resolvable_check(P);
    std::string tag = "k=" + std::to_string(k) + ": ";
    c.expect(r.resolvable, tag + "rejected");
    c.expect(!r.pivots.empty(), tag + "no pivots");
    for (const auto& p : r.pivots) c.expect(p.value > 0, tag + "nonpositive pivot");
    c.expect(form_from_map(r.witness) == P, tag + "witness map does not reproduce the form");
  }
}

void cone_oracle(Check& c) {
  testkit::Rng rng(20240101);
  BasisPtr b = testkit::sqrt2_basis();
  int violated = 0, brute = 0;
  for (int it = 0; it < 100; ++it) {
    std::vector<QModReal> mu, lambda;
    int m = rng.uniform(1, 3), v = rng.uniform(1, 3);
    for (int i = 0; i < m; ++i) mu.push_back(testkit::random_positive(rng, 8, 4));
    for (int j = 0; j < v; ++j) lambda.push_back(testkit::random_positive(rng, 8, 4));
    if (it % 4 == 0) lambda[0] = Rational(1, 2) * mu[0] + (m > 1 ? Rational(3, 4) * mu[m - 1] : QModReal::zero(b));
    ConformalData d{b, mu, lambda, QModReal::zero(b)};
    ConeResult r = cone_condition(d);
    bool found = testkit::brute_force_cone_witness(lambda, mu, 4);
    brute += found;
    if (found) c.expect(!r.holds, "brute force found a witness but Holds was returned");
    if (r.holds) continue;
    ++violated;
    if (!r.witness) {
      c.expect(false, "Violated without a witness");
      continue;
    }
    const ConeWitness& w = *r.witness;
    bool nonneg = std::all_of(w.c.begin(), w.c.end(), [](const Rational& x) { return x >= 0; }) &&
                  std::all_of(w.d.begin(), w.d.end(), [](const Rational& x) { return x >= 0; });
    bool nonzero = std::any_of(w.c.begin(), w.c.end(), [](const Rational& x) { return x != 0; });
    c.expect(nonneg && nonzero, "witness coefficients invalid");
    c.expect(qmod_combine(w.c, lambda) == w.value && qmod_combine(w.d, mu) == w.value,
             "witness does not re-verify");
    c.expect(testkit::sign_of(w.value) > 0, "witness value not positive");
  }
  c.expect(brute > 0 && violated >= brute, "no violated instances exercised");
}

void factor_round_trip(Check& c) {
  testkit::Rng rng(777);
  const Rational As[] = {Rational(1, 2), 1, 2, 4};
  for (int it = 0; it < 50; ++it) {
    int n = rng.uniform(1, 2);
    PolarizedPoly h;
    do h = testkit::random_hermitian_poly(rng, n, rng.uniform(2, 5), 1);
    while (h.size() < 2);
    Rational A = As[rng.uniform(0, 3)];
    int m = rng.uniform(1, 4);
    PolarizedPoly prod = testkit::scale(testkit::naive_pow(h, m), A);
    HermitianForm hf = HermitianForm::from_poly(n, h);
    FactorResult r = factor_by_h(HermitianForm::from_poly(n, prod), hf);
    c.expect(r == FactorResult{A, m}, "round trip " + std::to_string(it) + " returned (" + to_string(r.A) + ", " +
                                          std::to_string(r.m) + ")");

    // bump a diagonal coefficient so the product stays Hermitian
    std::vector<Exponents> diag;
    for (const auto& [e, x] : prod)
      if (std::equal(e.begin(), e.begin() + n, e.begin() + n)) diag.push_back(e);
    Exponents e = diag[rng.uniform(0, static_cast<int>(diag.size()) - 1)];
    prod[e] += 1;
    try {
      factor_by_h(HermitianForm::from_poly(n, prod), hf);
      c.expect(false, "perturbed product " + std::to_string(it) + " accepted");
    } catch (const Error& err) {
      c.expect(err.kind() == ErrorKind::NotAPurePower, "perturbed product: wrong error kind");
    }
  }
}

std::vector<int> identity_perm(int d) {
  std::vector<int> p(d);
  for (int i = 0; i < d; ++i) p[i] = i;
  return p;
}

std::vector<int> inverse(const std::vector<int>& p) {
  std::vector<int> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = static_cast<int>(i);
  return q;
}

struct ExpectedCycle {
  int ramification;
  int leading_index;
  Ext leading_coeff;
};

struct ExpectedPoint {
  Ext at;
  std::vector<ExpectedCycle> cycles;  // sorted by (ramification, leading index)
  BranchingClass::Kind kind;
  int period;
};

struct ExpectedFunction {
  const char* text;
  std::vector<Ext> locus;  // sorted by real part
  std::vector<ExpectedPoint> points;
};

void puiseux_suite(Check& c) {
  const Ext one(1), zero(0);
  const std::vector<ExpectedFunction> suite{
      {"Y^2 - z", {zero}, {{zero, {{2, 1, one}}, BranchingClass::Kind::SimpleCyclic, 2}}},
      {"Y^3 - z", {zero}, {{zero, {{3, 1, one}}, BranchingClass::Kind::SimpleCyclic, 3}}},
      {"Y^2 - z*(z-1)",
       {zero, one},
       {{zero, {{2, 1, one}}, BranchingClass::Kind::SimpleCyclic, 2},
        {one, {{2, 1, one}}, BranchingClass::Kind::SimpleCyclic, 2}}},
      {"Y^2 + 2*z*Y + z^3",
       {zero, one},
       {{zero, {{1, 1, Ext(-2)}, {1, 2, Ext(Rational(-1, 2))}}, BranchingClass::Kind::NonBranching, 0}}},
      {"Y^2 - z^2*(1+z)",
       {Ext(-1), zero},
       {{zero, {{1, 1, Ext(-1)}, {1, 1, one}}, BranchingClass::Kind::NonBranching, 0}}},
  };
  for (const auto& ef : suite) {
    std::string tag = std::string(ef.text) + ": ";
    AlgebraicFunction f = parse_algebraic(ef.text);
    const int d = f.degree();
    BranchLocus locus = branch_locus(f);

    std::vector<Ext> got_locus;
    for (const auto& p : locus.points) {
      c.expect(p.value.has_value(), tag + "locus point outside the field");
      if (p.value) got_locus.push_back(*p.value);
    }
    std::sort(got_locus.begin(), got_locus.end(),
              [](const Ext& a, const Ext& b) { return a.approx().real() < b.approx().real(); });
    c.expect(got_locus == ef.locus, tag + "branch locus");

    std::vector<Center> centers{Center::at_infinity()};
    for (const auto& z : got_locus) centers.push_back(Center::at(z));
    for (const auto& ctr : centers) {
      auto cycles = newton_puiseux(f, ctr, 6);
      int total = 0;
      for (const auto& s : cycles) {
        total += s.ramification;
        int g = guaranteed_order(f, s);
        for (const auto& [idx, x] : substitution_residual(f, s))
          c.expect(idx >= g || x.is_zero(), tag + "residual below guaranteed order at " + ctr.str());
      }
      c.expect(total == d, tag + "branch count at " + ctr.str());
    }

    for (const auto& ep : ef.points) {
      auto cycles = newton_puiseux(f, Center::at(ep.at), 6);
      std::sort(cycles.begin(), cycles.end(), [](const PuiseuxSeries& a, const PuiseuxSeries& b) {
        return std::tuple(a.ramification, a.leading_index(), a.leading_coeff().approx().real()) <
               std::tuple(b.ramification, b.leading_index(), b.leading_coeff().approx().real());
      });
      c.expect(cycles.size() == ep.cycles.size(), tag + "cycle count at " + ep.at.str());
      for (std::size_t i = 0; i < std::min(cycles.size(), ep.cycles.size()); ++i) {
        const auto& s = cycles[i];
        const auto& want = ep.cycles[i];
        c.expect(s.ramification == want.ramification, tag + "ramification at " + ep.at.str());
        c.expect(s.leading_index() == want.leading_index, tag + "leading exponent at " + ep.at.str());
        // with z - c = scale * t^N the leading coefficient in z is lc / scale^(i0/N)
        if (s.ramification == 1)
          c.expect(s.leading_coeff() / s.scale.pow(s.leading_index()) == want.leading_coeff,
                   tag + "leading coefficient at " + ep.at.str());
      }
      BranchingClass bc = classify_branching(f, Center::at(ep.at), 16);
      c.expect(bc.kind == ep.kind, tag + "classification at " + ep.at.str() + " is " + std::string(to_string(bc.kind)));
      if (ep.kind == BranchingClass::Kind::SimpleCyclic) c.expect(bc.period == ep.period, tag + "period");
    }

    // Lassos from one basepoint, ordered by angle, compose to the loop around
    // all of them; adding the loop around infinity gives the identity.
    Loop lasso;
    lasso.kind = Loop::Kind::Lassos;
    lasso.loci = {0};
    std::vector<std::vector<int>> acts;
    MonodromyAction first = monodromy(f, lasso, locus);
    const Ext b = first.basepoint;
    lasso.basepoint = b;
    acts.push_back(first.permutation);
    for (std::size_t k = 1; k < locus.points.size(); ++k) {
      lasso.loci = {static_cast<int>(k)};
      acts.push_back(monodromy(f, lasso, locus).permutation);
    }
    std::vector<std::pair<double, int>> by_angle;
    double need = 0;
    for (std::size_t k = 0; k < locus.points.size(); ++k) {
      Complex dz = locus.points[k].approx - b.approx();
      by_angle.push_back({std::arg(dz), static_cast<int>(k)});
      need = std::max(need, std::norm(dz) / (2 * dz.imag()));
    }
    std::sort(by_angle.begin(), by_angle.end());
    std::vector<int> product = identity_perm(d);
    Loop all = lasso;
    all.loci.clear();
    for (const auto& [angle, k] : by_angle) {
      product = compose(product, acts[k]);
      all.loci.push_back(k);
    }
    c.expect(monodromy(f, all, locus).permutation == product, tag + "multi-lasso differs from the product");
    Loop big;
    big.radius = Rational(static_cast<long>(std::ceil(1.5 * need + 1)));
    big.center = Ext::gaussian(b.a(), b.c() + big.radius);
    std::vector<int> at_infinity = inverse(monodromy(f, big, locus).permutation);
    c.expect(compose(product, at_infinity) == identity_perm(d), tag + "monodromy does not compose to the identity");

    for (std::size_t k = 0; k < locus.points.size(); ++k) {
      std::vector<int> ram;
      for (const auto& s : newton_puiseux(f, Center::at(*locus.points[k].value), 2)) ram.push_back(s.ramification);
      std::sort(ram.rbegin(), ram.rend());
      c.expect(cycle_type(acts[k]) == ram, tag + "local monodromy differs from ramification");
    }
  }
}

void min_ratio(Check& c) {
  testkit::Rng rng(31337);
  for (int it = 0; it < 1000; ++it) {
    int len = rng.uniform(1, 5);
    std::vector<QModReal> a, b;
    for (int i = 0; i < len; ++i) {
      a.push_back(testkit::random_positive(rng));
      b.push_back(testkit::random_positive(rng));
    }
    if (len > 1 && it % 5 == 0) {
      // a tie with the first ratio
      a[len - 1] = Rational(3) * a[0];
      b[len - 1] = Rational(3) * b[0];
    }
    std::size_t i0 = min_ratio_index(a, b);
    if (i0 >= a.size()) {
      c.expect(false, "index out of range");
      continue;
    }
    for (int i = 0; i < len; ++i) {
      QModReal diff = qmod_mul(a[i], b[i0]) - qmod_mul(b[i], a[i0]);
      c.expect(qmod_sign(diff) != Sign::Negative, "a_i b_i0 < b_i a_i0 at pair " + std::to_string(it));
      c.expect(testkit::sign_of(diff) >= 0, "squaring oracle disagrees at pair " + std::to_string(it));
    }
  }
}

void power_law(Check& c) {
  testkit::Rng rng(8675309);
  const int order = 6;
  int trivial = 0;
  for (int it = 0; it < 40; ++it) {
    int n = rng.uniform(1, 2);
    PolarizedPoly p = testkit::random_hermitian_poly(rng, n, rng.uniform(2, 4), 1);
    p = testkit::scale(p, 1 / p.begin()->second);  // the log needs constant term 1
    int a = rng.uniform(1, 3);
    QModReal w = it % 2 ? over_sqrt2(0, 1) : over_sqrt2(1, 0);
    PolarizedSeries P = HermitianForm::from_poly(n, p).to_series(order);
    PolarizedSeries Pa = HermitianForm::from_poly(n, testkit::naive_pow(p, a)).to_series(order);
    SeriesWithWeights good{{{w, Pa}, {-Rational(a) * w, P}}};
    c.expect(all_zero(weighted_log_residual(good)), "residual nonzero for instance " + std::to_string(it));

    SeriesWithWeights single{{{over_sqrt2(1, 0), P}}};
    if (all_zero(weighted_log_residual(single))) {
      ++trivial;  // log P has no mixed part, so no weight can be detected
      continue;
    }
    SeriesWithWeights bad{{{w, Pa}, {-Rational(a) * w + over_sqrt2(Rational(1, 3), 0), P}}};
    c.expect(!all_zero(weighted_log_residual(bad)), "perturbed weight not detected for instance " + std::to_string(it));
  }
  c.expect(trivial < 5, "too many instances without a mixed part");
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*run)(Check&);
    double budget;  // seconds, 0 for none
  };
  const Criterion criteria[] = {
      {"Veronese isometry for n <= 3, k <= 4", veronese_isometry, 1},
      {"worked example: cone, factor equation, construction", worked_example, 5},
      {"Calabi obstruction for (1+|z|^2)^a", calabi, 0},
      {"cone decision against brute force", cone_oracle, 30},
      {"factorization round trip", factor_round_trip, 0},
      {"Puiseux and monodromy suite", puiseux_suite, 10},
      {"minimum ratio index", min_ratio, 0},
      {"power-law verifier soundness", power_law, 0},
  };
  int failed = 0, idx = 0;
  for (const auto& cr : criteria) {
    ++idx;
    Check c;
    auto t0 = Clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    double t = seconds_since(t0);
    if (cr.budget > 0) c.expect(t < cr.budget, "over the time budget");
    std::ostringstream timing;
    timing.precision(3);
    timing << std::fixed << t << " s";
    std::cout << (c.ok ? "PASS" : "FAIL") << " criterion " << idx << ": " << cr.name << " (" << timing.str() << ")";
    if (!c.ok) std::cout << " -- " << c.why.str();
    std::cout << "\n";
    failed += !c.ok;
  }
  std::cout << idx - failed << "/" << idx << " criteria passed\n";
  return failed ? 1 : 0;
}
