#include "isokit/rational.hpp"

#include "isokit/error.hpp"

#include <cctype>
#include <cmath>

namespace isokit {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MixedBasis: return "MixedBasis";
    case ErrorKind::RefinementBudgetExceeded: return "RefinementBudgetExceeded";
    case ErrorKind::NonzeroConstantTerm: return "NonzeroConstantTerm";
    case ErrorKind::NonUnitConstantTerm: return "NonUnitConstantTerm";
    case ErrorKind::IrrationalGramEntry: return "IrrationalGramEntry";
    case ErrorKind::AsymmetricInput: return "AsymmetricInput";
    case ErrorKind::NotAPurePower: return "NotAPurePower";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NonPositiveEntry: return "NonPositiveEntry";
    case ErrorKind::NotSquareFree: return "NotSquareFree";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::UnsupportedCoefficientField: return "UnsupportedCoefficientField";
    case ErrorKind::PathTooCloseToLocus: return "PathTooCloseToLocus";
    case ErrorKind::AmbiguousMatching: return "AmbiguousMatching";
    case ErrorKind::TruncationInconclusive: return "TruncationInconclusive";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Internal: return "Internal";
  }
  return "Unknown";
}

namespace {

// Reads an optionally signed run of digits starting at pos.
std::optional<Integer> read_integer(std::string_view s, std::size_t& pos, bool allow_sign) {
  std::size_t start = pos;
  bool neg = false;
  if (allow_sign && pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
    neg = s[pos] == '-';
    ++pos;
  }
  std::size_t digits = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos == digits) {
    pos = start;
    return std::nullopt;
  }
  Integer v(std::string(s.substr(digits, pos - digits)));
  return neg ? Integer(-v) : v;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip();
  auto num = read_integer(text, pos, true);
  if (!num) throw SyntaxError(1, static_cast<int>(pos) + 1, "integer", std::string(text));
  Integer den = 1;
  skip();
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    skip();
    auto d = read_integer(text, pos, false);
    if (!d) throw SyntaxError(1, static_cast<int>(pos) + 1, "denominator", std::string(text));
    if (*d == 0)
      throw SyntaxError(1, static_cast<int>(pos), "nonzero denominator", std::string(text));
    den = *d;
    skip();
  }
  if (pos != text.size())
    throw SyntaxError(1, static_cast<int>(pos) + 1, "end of rational", std::string(text));
  return Rational(*num, den);
}

std::string to_string(const Rational& q) { return q.str(); }

std::optional<Rational> rational_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  Integer n = numer(q), d = denom(q);
  Integer rn = boost::multiprecision::sqrt(n), rd = boost::multiprecision::sqrt(d);
  if (rn * rn != n || rd * rd != d) return std::nullopt;
  return Rational(rn, rd);
}

Rational binomial(const Rational& a, long k) {
  Rational r = 1;
  for (long i = 0; i < k; ++i) r = r * (a - i) / (i + 1);
  return r;
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

Rational rationalize(double x, long max_den) {
  if (!std::isfinite(x)) return 0;
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double v = x;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(v);
    if (std::abs(a) > 1e15) break;
    long ai = static_cast<long>(a);
    long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    double frac = v - a;
    if (frac < 1e-15) break;
    v = 1.0 / frac;
  }
  if (k1 == 0) return Rational(static_cast<long>(std::llround(x)));
  return Rational(Integer(h1), Integer(k1));
}

}  // namespace isokit
