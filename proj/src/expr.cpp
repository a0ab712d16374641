#include "isokit/expr.hpp"

#include "isokit/error.hpp"

#include <algorithm>
#include <cctype>

namespace isokit {

namespace {

struct Token {
  enum Kind { Number, Name, Symbol, End } kind = End;
  std::string text;
  int line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = col_;
    if (pos_ >= s_.size()) return t;
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      t.kind = Token::Number;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
        advance(t.text);
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Token::Name;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        advance(t.text);
      return t;
    }
    // U+2212 MINUS SIGN
    if (s_.substr(pos_, 3) == "\xE2\x88\x92") {
      pos_ += 3;
      ++col_;
      t.kind = Token::Symbol;
      t.text = "-";
      return t;
    }
    if (std::string_view("+-*/^()").find(c) != std::string_view::npos) {
      t.kind = Token::Symbol;
      advance(t.text);
      return t;
    }
    throw SyntaxError(line_, col_, "a number, name, operator or parenthesis",
                      "unexpected character '" + std::string(1, c) + "'");
  }

 private:
  void advance(std::string& out) {
    out += s_[pos_++];
    ++col_;
  }
  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      if (s_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

ExprPoly constant(const RadicalSum& c, std::size_t nvars) {
  ExprPoly p;
  if (!c.is_zero()) p[std::vector<int>(nvars, 0)] = c;
  return p;
}

void add_into(ExprPoly& p, const std::vector<int>& e, const RadicalSum& c) {
  auto it = p.find(e);
  if (it == p.end()) {
    if (!c.is_zero()) p.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) p.erase(it);
}

ExprPoly add(const ExprPoly& a, const ExprPoly& b, bool negate) {
  ExprPoly r = a;
  for (const auto& [e, c] : b) add_into(r, e, negate ? -c : c);
  return r;
}

ExprPoly multiply(const ExprPoly& a, const ExprPoly& b) {
  ExprPoly r;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      std::vector<int> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      add_into(r, e, ca * cb);
    }
  return r;
}

std::optional<Rational> as_rational(const RadicalSum& c) {
  if (c.is_zero()) return Rational(0);
  if (c.terms().size() == 1 && c.terms()[0].second == 1) return c.terms()[0].first;
  return std::nullopt;
}

// The polynomial is a constant; its value.
std::optional<RadicalSum> constant_value(const ExprPoly& p, std::size_t nvars) {
  if (p.empty()) return RadicalSum();
  if (p.size() == 1 && p.begin()->first == std::vector<int>(nvars, 0)) return p.begin()->second;
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars,
         const std::map<std::string, int>& aliases)
      : lex_(text), vars_(vars), aliases_(aliases) {
    tok_ = lex_.next();
  }

  ExprPoly parse() {
    ExprPoly p = expr();
    if (tok_.kind != Token::End) fail("an operator or end of input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& expected) {
    std::string got = tok_.kind == Token::End ? "end of input" : "'" + tok_.text + "'";
    throw SyntaxError(tok_.line, tok_.column, expected, "found " + got);
  }

  bool is_symbol(const char* s) const { return tok_.kind == Token::Symbol && tok_.text == s; }
  void bump() { tok_ = lex_.next(); }

  ExprPoly expr() {
    ExprPoly acc = term();
    while (is_symbol("+") || is_symbol("-")) {
      bool minus = tok_.text == "-";
      bump();
      acc = add(acc, term(), minus);
    }
    return acc;
  }

  bool starts_atom() const {
    return tok_.kind == Token::Number || tok_.kind == Token::Name || is_symbol("(");
  }

  ExprPoly term() {
    ExprPoly acc = unary();
    for (;;) {
      if (is_symbol("*")) {
        bump();
        acc = multiply(acc, unary());
      } else if (is_symbol("/")) {
        Token at = tok_;
        bump();
        ExprPoly d = unary();
        auto v = constant_value(d, vars_.size());
        std::optional<Rational> q = v ? as_rational(*v) : std::nullopt;
        if (!q || *q == 0) {
          tok_ = at;
          fail("a nonzero rational constant after '/'");
        }
        acc = multiply(acc, constant(RadicalSum::of(1 / *q, 1), vars_.size()));
      } else if (starts_atom()) {
        acc = multiply(acc, power());
      } else {
        return acc;
      }
    }
  }

  ExprPoly unary() {
    if (is_symbol("-")) {
      bump();
      ExprPoly p = unary();
      return add(ExprPoly{}, p, true);
    }
    if (is_symbol("+")) {
      bump();
      return unary();
    }
    return power();
  }

  ExprPoly power() {
    ExprPoly base = atom();
    if (!is_symbol("^")) return base;
    bump();
    if (tok_.kind != Token::Number || tok_.text.find('.') != std::string::npos || tok_.text.size() > 4)
      fail("a non-negative integer exponent");
    int k = std::stoi(tok_.text);
    bump();
    ExprPoly r = constant(RadicalSum::of(1, 1), vars_.size());
    for (int i = 0; i < k; ++i) r = multiply(r, base);
    return r;
  }

  ExprPoly atom() {
    if (tok_.kind == Token::Number) {
      Rational v = number(tok_.text);
      bump();
      return constant(RadicalSum::of(v, 1), vars_.size());
    }
    if (tok_.kind == Token::Name) {
      std::string name = tok_.text;
      if (name == "sqrt") {
        bump();
        if (!is_symbol("(")) fail("'(' after sqrt");
        Token at = tok_;
        bump();
        ExprPoly arg = expr();
        if (!is_symbol(")")) fail("')'");
        auto v = constant_value(arg, vars_.size());
        std::optional<Rational> q = v ? as_rational(*v) : std::nullopt;
        if (!q || *q < 0) {
          tok_ = at;
          fail("a non-negative rational constant inside sqrt()");
        }
        bump();
        return constant(RadicalSum::of(1, *q), vars_.size());
      }
      int idx = -1;
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) idx = static_cast<int>(i);
      if (auto it = aliases_.find(name); idx < 0 && it != aliases_.end()) idx = it->second;
      if (idx < 0) {
        std::string allowed;
        for (const auto& v : vars_) allowed += (allowed.empty() ? "" : ", ") + v;
        fail("a variable (" + allowed + ")");
      }
      bump();
      std::vector<int> e(vars_.size(), 0);
      e[idx] = 1;
      return ExprPoly{{e, RadicalSum::of(1, 1)}};
    }
    if (is_symbol("(")) {
      bump();
      ExprPoly p = expr();
      if (!is_symbol(")")) fail("')'");
      bump();
      return p;
    }
    fail("a number, variable or '('");
  }

  Rational number(const std::string& s) {
    if (std::count(s.begin(), s.end(), '.') > 1) fail("a number");
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(Integer(s));
    std::string whole = s.substr(0, dot), frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) fail("a number");
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    Integer w = whole.empty() ? Integer(0) : Integer(whole);
    Integer f = frac.empty() ? Integer(0) : Integer(frac);
    return Rational(w * scale + f, scale);
  }

  Lexer lex_;
  Token tok_;
  const std::vector<std::string>& vars_;
  const std::map<std::string, int>& aliases_;
};

}  // namespace

ExprPoly parse_polynomial(std::string_view text, const std::vector<std::string>& vars,
                          const std::map<std::string, int>& aliases) {
  return Parser(text, vars, aliases).parse();
}

std::vector<std::string> form_variables(int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("z" + std::to_string(i));
  for (int i = 1; i <= n; ++i) v.push_back("xi" + std::to_string(i));
  return v;
}

namespace {

std::map<std::string, int> form_aliases(int n) {
  if (n != 1) return {};
  return {{"z", 0}, {"xi", 1}};
}

}  // namespace

PolarizedPoly parse_polarized(std::string_view text, int n) {
  PolarizedPoly out;
  for (const auto& [e, c] : parse_polynomial(text, form_variables(n), form_aliases(n))) {
    auto q = as_rational(c);
    if (!q) throw Error(ErrorKind::IrrationalGramEntry, "coefficients of a potential must be rational");
    out[e] = *q;
  }
  return out;
}

MapComponent parse_component(std::string_view text, int n) {
  std::map<std::string, int> aliases;
  if (n == 1) aliases["z"] = 0;
  std::vector<std::string> vars;
  for (int i = 1; i <= n; ++i) vars.push_back("z" + std::to_string(i));
  MapComponent out;
  for (const auto& [e, c] : parse_polynomial(text, vars, aliases)) {
    if (c.terms().size() != 1)
      throw Error(ErrorKind::InvalidArgument,
                  "each map coefficient must be a single r*sqrt(q) in \"" + std::string(text) + "\"");
    out[e] = RadicalCoeff(c.terms()[0].first, c.terms()[0].second);
  }
  return out;
}

AlgebraicFunction parse_algebraic(std::string_view text) {
  auto p = parse_polynomial(text, {"z", "Y"}, {{"y", 1}});
  int d = 0;
  for (const auto& [e, c] : p) d = std::max(d, e[1]);
  std::vector<std::vector<Rational>> coeffs(d + 1);
  for (const auto& [e, c] : p) {
    auto q = as_rational(c);
    if (!q) throw Error(ErrorKind::InvalidArgument, "coefficients of P(z, Y) must be rational");
    auto& row = coeffs[e[1]];
    if (static_cast<int>(row.size()) <= e[0]) row.resize(e[0] + 1);
    row[e[0]] = *q;
  }
  std::vector<UPoly> polys;
  for (auto& row : coeffs) polys.emplace_back(std::move(row));
  return AlgebraicFunction(std::move(polys));
}

Ext parse_point(std::string_view text) {
  Ext out(0);
  for (const auto& [e, c] : parse_polynomial(text, {"i"})) {
    Ext unit = Ext::i().pow(e[0]);
    for (const auto& [coeff, radicand] : c.terms()) {
      Ext term = radicand == 1 ? Ext(coeff) : Ext(0, coeff, 0, 0, radicand);
      out += term * unit;
    }
  }
  return out;
}

}  // namespace isokit
