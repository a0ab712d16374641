#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

#include <optional>
#include <string>
#include <string_view>

namespace isokit {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXq = MatrixX<Rational>;
using VectorXq = VectorX<Rational>;

/// Parses "p", "-p", "p/q" (optionally surrounded by blanks). Throws
/// SyntaxError on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical "p" or "p/q" spelling.
std::string to_string(const Rational& q);

inline Integer numer(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denom(const Rational& q) { return boost::multiprecision::denominator(q); }

inline int sign(const Rational& q) { return q.sign(); }

/// Exact square root when q is the square of a rational.
std::optional<Rational> rational_sqrt(const Rational& q);

inline bool is_rational_square(const Rational& q) { return rational_sqrt(q).has_value(); }

Rational binomial(const Rational& a, long k);

double to_double(const Rational& q);

/// Closest dyadic-free rational approximation with denominator <= max_den
/// (continued fractions). Used only to propose exact candidates that are then
/// verified exactly.
Rational rationalize(double x, long max_den);

}  // namespace isokit
