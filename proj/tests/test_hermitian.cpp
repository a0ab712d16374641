#include "support.hpp"

#include "isokit/error.hpp"
#include "isokit/expr.hpp"
#include "isokit/hermitian.hpp"

#include <doctest.h>

using namespace isokit;

namespace {

HermitianForm form(const char* text, int n = 1) { return HermitianForm::from_poly(n, parse_polarized(text, n)); }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

}  // namespace

TEST_SUITE("hermitian") {
  TEST_CASE("gram matrix of a potential") {
    HermitianForm h = form("1 + 2*z*xi + 3*z^2*xi^2 + z*xi^2 + z^2*xi");
    CHECK(h.coeff({1}, {1}) == 2);
    CHECK(h.coeff({2}, {1}) == 1);
    CHECK(h.coeff({1}, {2}) == 1);
    CHECK(h.constant_term() == 1);
    CHECK(h.degree() == 4);
    CHECK(h.gram() == h.gram().transpose());
    CHECK(form(h.str().c_str()) == h);
  }

  TEST_CASE("asymmetric input is rejected") {
    CHECK(kind_of([] { form("1 + z"); }) == ErrorKind::AsymmetricInput);
    CHECK(kind_of([] { form("1 + z*xi^2 + 2*z^2*xi"); }) == ErrorKind::AsymmetricInput);
  }

  TEST_CASE("veronese component counts") {
    for (int n = 1; n <= 3; ++n)
      for (int k = 1; k <= 4; ++k) {
        MapTuple V = veronese(n, k);
        CHECK(Rational(static_cast<long>(V.dimension())) == testkit::binomial_oracle(n + k, k) - 1);
        if (k == 2) CHECK(static_cast<int>(V.dimension()) == n * (n + 3) / 2);
        CHECK(form_from_map(V) == form_power(form_from_map(identity_map(n)), k));
      }
  }

  TEST_CASE("quadratic veronese in one variable") {
    MapTuple V = veronese(1, 2);
    REQUIRE(V.dimension() == 2);
    std::vector<std::string> comps;
    for (const auto& c : V.components()) comps.push_back(component_str(c));
    std::sort(comps.begin(), comps.end());
    CHECK(comps == std::vector<std::string>{"sqrt(2)*z1", "z1^2"});
  }

  TEST_CASE("map products and powers") {
    MapTuple id = identity_map(2);
    HermitianForm base = form_from_map(id);
    CHECK(form_from_map(product_map(id, id)) == form_product(base, base));
    CHECK(form_from_map(power_map(id, 3)) == form_power(base, 3));
    CHECK(form_from_map(power_map(id, 0)) == HermitianForm::constant(2, 1));
  }

  TEST_CASE("normalized maps vanish at the origin") {
    MapComponent c{{{0}, RadicalCoeff(1)}};
    CHECK(kind_of([&] { MapTuple(1, {c}); }) == ErrorKind::PreconditionViolated);
  }

  TEST_CASE("integer powers are resolvable with positive pivots") {
    for (int k = 1; k <= 6; ++k) {
      HermitianForm P = form_power(form("1 + z1*xi1"), k);
      ResolvableResult r = resolvable_check(P);
      CHECK(r.resolvable);
      for (const auto& p : r.pivots) CHECK(p.value > 0);
      CHECK(form_from_map(r.witness) == P);
    }
  }

  TEST_CASE("fractional powers fail at the first negative binomial coefficient") {
    struct Case {
      Rational a;
      int order, k;
    };
    for (const Case& c : {Case{Rational(1, 2), 4, 2}, Case{Rational(5, 2), 8, 4}, Case{Rational(1, 3), 4, 2}}) {
      PolarizedSeries x = PolarizedSeries::monomial(1, c.order, {1}, {1}, 1);
      ResolvableResult r = resolvable_check(series_binomial_pow(x, c.a, c.order), c.order);
      CHECK_FALSE(r.resolvable);
      CHECK(r.fail_z == Monomial{c.k});
      CHECK(r.fail_xi == Monomial{c.k});
      CHECK(r.fail_value == testkit::binomial_oracle(c.a, c.k));
      CHECK(r.fail_value < 0);
    }
  }

  TEST_CASE("resolvable check needs constant term 1") {
    CHECK(kind_of([] { resolvable_check(form("2 + z*xi")); }) == ErrorKind::NonUnitConstantTerm);
  }

  TEST_CASE("off-diagonal mass breaks positivity") {
    ResolvableResult r = resolvable_check(form("1 + z*xi + 2*z^2*xi + 2*z*xi^2 + z^2*xi^2"));
    CHECK_FALSE(r.resolvable);
  }

  TEST_CASE("factorization round trip with a naive product oracle") {
    testkit::Rng rng(21);
    for (int it = 0; it < 30; ++it) {
      int n = rng.uniform(1, 2);
      PolarizedPoly h = testkit::random_hermitian_poly(rng, n, rng.uniform(2, 5));
      HermitianForm H = HermitianForm::from_poly(n, h);
      if (H.is_constant()) continue;
      Rational A = std::vector<Rational>{Rational(1, 2), 1, 2, 4}[rng.uniform(0, 3)];
      int m = rng.uniform(1, 4);
      PolarizedPoly prod = testkit::scale(testkit::naive_pow(h, m), A);
      CHECK(factor_by_h(HermitianForm::from_poly(n, prod), H) == FactorResult{A, m});
      prod[std::vector<int>(2 * n, 0)] += 1;
      CHECK(kind_of([&] { factor_by_h(HermitianForm::from_poly(n, prod), H); }) == ErrorKind::NotAPurePower);
    }
  }

  TEST_CASE("factorization preconditions") {
    CHECK(kind_of([] { factor_by_h(form("1 + z*xi"), form("3")); }) == ErrorKind::PreconditionViolated);
    CHECK(kind_of([] { factor_by_h(form("1 + z*xi"), form("1 + z1*xi1", 2)); }) == ErrorKind::InvalidArgument);
    CHECK(kind_of([] { factor_by_h(form("1 + 2*z*xi"), form("1 + z*xi")); }) == ErrorKind::NotAPurePower);
  }

  TEST_CASE("division with remainder") {
    PolarizedPoly h = parse_polarized("1 + z*xi", 1);
    PolarizedPoly p = parse_polarized("2 + 3*z*xi + z^2*xi^2 + z", 1);
    auto [q, r] = poly_divide(p, h);
    PolarizedPoly back = poly_mul(q, h);
    for (const auto& [e, c] : r) back[e] += c;
    std::erase_if(back, [](const auto& kv) { return kv.second == 0; });
    CHECK(back == p);
  }

  TEST_CASE("constructed identities have zero residual") {
    BasisPtr b = testkit::sqrt2_basis();
    std::vector<QModReal> mu{testkit::over_sqrt2(Rational(1, 4), 1), testkit::over_sqrt2(Rational(1, 4), 0)};
    std::vector<QModReal> lambda{testkit::over_sqrt2(0, 1)};
    for (auto [m1, m2, n1] : {std::tuple{1, 3, 1}, std::tuple{2, 2, 2}, std::tuple{3, 1, 3}}) {
      Example62Input in{mu, lambda, {m1, m2}, {n1}, {0, 0}, {0}, MapTuple(1), 1};
      IdentityInstance id = example62_construct(in);
      CHECK(all_zero(weighted_log_residual(id.to_series(10))));
      for (const auto& f : id.factors) CHECK(form_from_map(f.map) == f.form);
    }
  }

  TEST_CASE("construction with an auxiliary map") {
    // mu = (2, 1), lambda = (3): 2*1 + 1*1 = 3*1 and 2*1 + 1*2 = 3*1 + 1.
    BasisPtr q = QBasis::rationals();
    auto r = [&](int v) { return QModReal::rational(q, v); };
    MapTuple f(1, {parse_component("z^2", 1)});
    Example62Input in{{r(2), r(1)}, {r(3)}, {1, 2}, {1}, {1, 1}, {1}, f, 1};
    IdentityInstance id = example62_construct(in);
    CHECK(all_zero(weighted_log_residual(id.to_series(2 * id.max_degree()))));
  }

  TEST_CASE("construction rejects an unbalanced relation") {
    BasisPtr q = QBasis::rationals();
    auto r = [&](int v) { return QModReal::rational(q, v); };
    // 1 + 1 != 2 + 1
    Example62Input in{{r(1), r(1)}, {r(1)}, {1, 1}, {2}, {0, 0}, {0}, MapTuple(1), 1};
    CHECK(kind_of([&] { example62_construct(in); }) == ErrorKind::PreconditionViolated);
  }
}
