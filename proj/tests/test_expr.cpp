#include "isokit/error.hpp"
#include "isokit/expr.hpp"
#include "isokit/hermitian.hpp"

#include <doctest.h>

using namespace isokit;

namespace {

SyntaxError syntax_error(const char* text) {
  try {
    parse_algebraic(text);
  } catch (const SyntaxError& e) {
    return e;
  }
  FAIL("parsed ", text);
  return SyntaxError(0, 0, "");
}

}  // namespace

TEST_SUITE("expr") {
  TEST_CASE("implicit multiplication and powers") {
    PolarizedPoly p = parse_polarized("(1 + z*xi)^2", 1);
    CHECK(p.at({0, 0}) == 1);
    CHECK(p.at({1, 1}) == 2);
    CHECK(p.at({2, 2}) == 1);
    CHECK(parse_polarized("2z1 xi1", 1) == parse_polarized("2*z1*xi1", 1));
    CHECK(parse_polarized("z1*xi1/4", 1).at({1, 1}) == Rational(1, 4));
    CHECK(parse_polarized("0.25*z*xi", 1).at({1, 1}) == Rational(1, 4));
  }

  TEST_CASE("unicode minus") {
    CHECK(parse_algebraic("Y^2 \xE2\x88\x92 z").str() == "Y^2 - z");
  }

  TEST_CASE("algebraic functions print and reparse") {
    for (const char* t : {"Y^2 - z", "Y^2 + 2*z*Y + z^3", "z*Y^2 + Y + 1", "Y^3 - 3*Y + z^4 - z"}) {
      AlgebraicFunction f = parse_algebraic(t);
      CHECK(f.str() == t);
      CHECK(parse_algebraic(f.str()).str() == f.str());
    }
  }

  TEST_CASE("map components keep radicals") {
    MapComponent c = parse_component("sqrt(2)*z1*z2 + 1/2*sqrt(3)*z1^2", 2);
    CHECK(c.at({1, 1}) == RadicalCoeff(1, 2));
    CHECK(c.at({2, 0}) == RadicalCoeff(Rational(1, 2), 3));
    CHECK(parse_component(component_str(c), 2) == c);
    CHECK_THROWS_AS(parse_component("(1 + sqrt(2))*z", 1), Error);
  }

  TEST_CASE("irrational potentials are rejected") {
    try {
      parse_polarized("1 + sqrt(2)*z*xi", 1);
      FAIL("accepted sqrt(2)");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::IrrationalGramEntry);
    }
  }

  TEST_CASE("errors carry line and column") {
    SyntaxError e = syntax_error("Y^2 - ");
    CHECK(e.line() == 1);
    CHECK(e.column() == 7);
    e = syntax_error("Y^2 +\n w");
    CHECK(e.line() == 2);
    CHECK(e.column() == 2);
    CHECK(e.expected().find("variable") != std::string::npos);
    e = syntax_error("Y / z");
    CHECK(e.column() == 3);
    e = syntax_error("Y^z");
    CHECK(e.column() == 3);
    e = syntax_error("(Y + 1");
    CHECK(e.expected() == "')'");
    e = syntax_error("Y # 2");
    CHECK(e.column() == 3);
  }

  TEST_CASE("non-squarefree and imprimitive polynomials are rejected") {
    try {
      parse_algebraic("(Y - z)^2");
      FAIL("accepted a square");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotSquareFree);
    }
    try {
      parse_algebraic("z*Y^2 - z^2");
      FAIL("accepted a common factor");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotPrimitive);
    }
  }
}
