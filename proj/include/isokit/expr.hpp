#pragma once

// Recursive-descent parser for polynomial expressions with exact rational
// literals and sqrt(q) constants: "Y^2 - z", "(1+z1*xi1)^2", "sqrt(2)*z1".
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/')? unary)*      juxtaposition multiplies
//   unary  := ('+' | '-') unary | power
//   power  := atom ('^' integer)?
//   atom   := number | name | 'sqrt' '(' expr ')' | '(' expr ')'
//
// Division is only by nonzero rational constants.

#include "isokit/field.hpp"
#include "isokit/hermitian.hpp"
#include "isokit/puiseux.hpp"
#include "isokit/scalar.hpp"

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace isokit {

/// Exponent vector over the declared variables -> coefficient.
using ExprPoly = std::map<std::vector<int>, RadicalSum>;

/// Throws SyntaxError with the position inside `text`.
ExprPoly parse_polynomial(std::string_view text, const std::vector<std::string>& vars,
                          const std::map<std::string, int>& aliases = {});

/// Variables z1..zn then xi1..xin; "z" and "xi" stand for z1, xi1 when n = 1.
std::vector<std::string> form_variables(int n);

/// Polynomial in (z, xi) with rational coefficients.
PolarizedPoly parse_polarized(std::string_view text, int n);
/// One map component in z1..zn; each coefficient must be r*sqrt(q).
MapComponent parse_component(std::string_view text, int n);
/// P(z, Y) with rational coefficients.
AlgebraicFunction parse_algebraic(std::string_view text);
/// A point of the coefficient field written with i, e.g. "1/2 + sqrt(3)/2*i".
Ext parse_point(std::string_view text);

}  // namespace isokit
