#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace isokit {

enum class ErrorKind {
  MixedBasis,
  RefinementBudgetExceeded,
  NonzeroConstantTerm,
  NonUnitConstantTerm,
  IrrationalGramEntry,
  AsymmetricInput,
  NotAPurePower,
  PreconditionViolated,
  NonPositiveEntry,
  NotSquareFree,
  NotPrimitive,
  UnsupportedCoefficientField,
  PathTooCloseToLocus,
  AmbiguousMatching,
  TruncationInconclusive,
  SyntaxError,
  SchemaError,
  InvalidArgument,
  Internal,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so that callers (and
/// the CLI exit-code logic) can branch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failure with a position inside the offending text.
class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, const std::string& expected, const std::string& context = {})
      : Error(ErrorKind::SyntaxError, format(line, column, expected, context)),
        line_(line),
        column_(column),
        expected_(expected),
        context_(context) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }
  const std::string& context() const noexcept { return context_; }

 private:
  static std::string format(int line, int column, const std::string& expected,
                            const std::string& context) {
    std::string s = "line " + std::to_string(line) + ", column " + std::to_string(column) +
                    ": expected " + expected;
    if (!context.empty()) s += " (in " + context + ")";
    return s;
  }

  int line_;
  int column_;
  std::string expected_;
  std::string context_;
};

}  // namespace isokit
