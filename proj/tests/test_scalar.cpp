#include "support.hpp"

#include "isokit/conformal.hpp"
#include "isokit/error.hpp"
#include "isokit/scalar.hpp"

#include <doctest.h>

using namespace isokit;
using testkit::over_sqrt2;

TEST_SUITE("scalar") {
  TEST_CASE("rational literals are canonical") {
    CHECK(parse_rational("3/6") == Rational(1, 2));
    CHECK(to_string(parse_rational("3/6")) == "1/2");
    CHECK(parse_rational("-4/2") == Rational(-2));
    CHECK(to_string(parse_rational("-4/2")) == "-2");
    CHECK(parse_rational("17") == Rational(17));
  }

  TEST_CASE("malformed rationals report a position") {
    try {
      parse_rational("1/0");
      FAIL("accepted 1/0");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 1);
      CHECK(e.column() == 3);
    }
    CHECK_THROWS_AS(parse_rational("1/"), SyntaxError);
    CHECK_THROWS_AS(parse_rational("x"), SyntaxError);
    CHECK_THROWS_AS(parse_rational("1/2/3"), SyntaxError);
  }

  TEST_CASE("basis arithmetic and rendering") {
    QModReal a = over_sqrt2(1, 1), b = over_sqrt2(Rational(1, 2), -1);
    CHECK(a + b == over_sqrt2(Rational(3, 2), 0));
    CHECK((a - a).is_zero());
    CHECK((a + b).is_rational());
    CHECK(over_sqrt2(Rational(1, 4), 1).str() == "1/4 + sqrt(2)");
    CHECK(qmod_mul(a, a) == over_sqrt2(3, 2));
  }

  TEST_CASE("mixing bases is rejected") {
    QModReal a = over_sqrt2(1, 1);
    QModReal q = QModReal::rational(QBasis::rationals(), 1);
    std::vector<Rational> c{1, 1};
    std::vector<QModReal> xs{a, q};
    CHECK_THROWS_AS(qmod_combine(c, xs), Error);
    try {
      qmod_combine(c, xs);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MixedBasis);
    }
  }

  TEST_CASE("sign agrees with an exact squaring oracle") {
    testkit::Rng rng(11);
    for (int it = 0; it < 500; ++it) {
      Rational a = rng.rational(30, 7), b = rng.rational(30, 7);
      QModReal x = over_sqrt2(a, b);
      CHECK(static_cast<int>(qmod_sign(x)) == testkit::sign_sqrt2(a, b));
    }
  }

  TEST_CASE("near-cancellation needs refinement budget") {
    // 577/408 is a convergent of sqrt(2): the difference is about 2e-6.
    QModReal tiny = over_sqrt2(Rational(577, 408), -1);
    CHECK(qmod_sign(tiny) == Sign::Positive);
    CHECK(qmod_sign(-tiny) == Sign::Negative);
    try {
      qmod_sign(tiny, RefineOptions{2});
      FAIL("separated with two refinements");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::RefinementBudgetExceeded);
    }
    CHECK(qmod_sign(over_sqrt2(99, -70)) == Sign::Positive);
    CHECK(qmod_sign(over_sqrt2(0, 0)) == Sign::Zero);
  }

  TEST_CASE("enclosures shrink and contain the value") {
    QModReal x = over_sqrt2(Rational(-1, 3), Rational(5, 2));
    double v = testkit::approx(x);
    Rational prev_width = 1000;
    for (int step = 0; step < 20; ++step) {
      Interval iv = x.enclose(step);
      CHECK(to_double(iv.lo) <= v + 1e-12);
      CHECK(to_double(iv.hi) >= v - 1e-12);
      CHECK(iv.hi - iv.lo <= prev_width);
      prev_width = iv.hi - iv.lo;
    }
    CHECK(prev_width < Rational(1, 10000));
  }

  TEST_CASE("refiner rules round-trip") {
    CHECK(Refiner::parse("unit") == Refiner::unit());
    CHECK(Refiner::parse("sqrt(2)") == Refiner::sqrt(2));
    CHECK(Refiner::sqrt(Rational(3, 2)).rule() == "sqrt(3/2)");
    CHECK(Refiner::parse(Refiner::sqrt(5).rule()) == Refiner::sqrt(5));
  }

  TEST_CASE("radical sums merge square classes") {
    RadicalSum r2 = RadicalSum::of(1, 2), r3 = RadicalSum::of(1, 3);
    RadicalSum sq = r2 * r2;
    REQUIRE(sq.terms().size() == 1);
    CHECK(sq.terms()[0] == std::pair<Rational, Rational>(2, 1));
    RadicalSum six = r2 * r3;
    REQUIRE(six.terms().size() == 1);
    CHECK(six.terms()[0].second == 6);
    RadicalSum merged = RadicalSum::of(1, 8) + RadicalSum::of(-2, 2);
    CHECK(merged.is_zero());
    CHECK(radical_sign(RadicalSum::of(1, 3) - RadicalSum::of(1, 2)) == Sign::Positive);
    auto in = (RadicalSum::of(3, 1) + RadicalSum::of(1, 8)).in_basis(testkit::sqrt2_basis());
    REQUIRE(in);
    CHECK(*in == over_sqrt2(3, 2));
    CHECK_FALSE(six.in_basis(testkit::sqrt2_basis()));
  }

  TEST_CASE("minimum-ratio index dominates every ratio") {
    testkit::Rng rng(7);
    for (int it = 0; it < 200; ++it) {
      int k = rng.uniform(1, 4);
      std::vector<QModReal> a, b;
      for (int i = 0; i < k; ++i) {
        a.push_back(testkit::random_positive(rng));
        b.push_back(testkit::random_positive(rng));
      }
      std::size_t i0 = min_ratio_index(a, b);
      REQUIRE(i0 < a.size());
      // a_i / b_i >= a_i0 / b_i0, cross-multiplied and checked numerically
      // with a safety margin plus exactly below.
      for (int i = 0; i < k; ++i) {
        double lhs = testkit::approx(a[i]) * testkit::approx(b[i0]);
        double rhs = testkit::approx(b[i]) * testkit::approx(a[i0]);
        CHECK(lhs >= rhs - 1e-9 * (1 + std::abs(rhs)));
        RadicalSum diff = RadicalSum::from(a[i]) * RadicalSum::from(b[i0]) -
                          RadicalSum::from(b[i]) * RadicalSum::from(a[i0]);
        CHECK(radical_sign(diff) != Sign::Negative);
      }
    }
  }

  TEST_CASE("minimum-ratio index rejects non-positive input") {
    std::vector<QModReal> a{over_sqrt2(1, -1)}, b{over_sqrt2(1, 0)};
    try {
      min_ratio_index(a, b);
      FAIL("accepted 1 - sqrt(2)");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NonPositiveEntry);
    }
  }
}
