#include "isokit/scalar.hpp"

#include "isokit/error.hpp"

#include <algorithm>
#include <sstream>

namespace isokit {

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval operator*(const Rational& c, const Interval& a) {
  if (c >= 0) return {c * a.lo, c * a.hi};
  return {c * a.hi, c * a.lo};
}

Interval operator*(const Interval& a, const Interval& b) {
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval sqrt_enclosure(const Rational& q, int bits) {
  if (auto r = rational_sqrt(q)) return {*r, *r};
  // sqrt(n/d) * 2^bits = sqrt(n*d*4^bits) / d
  Integer n = numer(q), d = denom(q);
  Integer scale = Integer(1) << bits;
  Integer root = boost::multiprecision::sqrt(Integer(n * d * scale * scale));
  Integer lo = root / d;
  Rational den(scale);
  return {Rational(lo) / den, Rational(lo + 1) / den};
}

Refiner Refiner::sqrt(Rational q) {
  if (q <= 0) throw Error(ErrorKind::InvalidArgument, "sqrt refiner needs a positive radicand");
  Refiner r;
  r.kind = Kind::Sqrt;
  r.radicand = std::move(q);
  return r;
}

Interval Refiner::enclose(int step) const {
  if (kind == Kind::Unit) return {Rational(1), Rational(1)};
  return sqrt_enclosure(radicand, step + 1);
}

std::string Refiner::rule() const {
  if (kind == Kind::Unit) return "unit";
  return "sqrt(" + to_string(radicand) + ")";
}

Refiner Refiner::parse(const std::string& rule) {
  if (rule == "unit") return unit();
  if (rule.size() > 6 && rule.rfind("sqrt(", 0) == 0 && rule.back() == ')') {
    Rational q = parse_rational(rule.substr(5, rule.size() - 6));
    if (q <= 0) throw Error(ErrorKind::SchemaError, "sqrt rule needs a positive radicand: " + rule);
    return sqrt(q);
  }
  throw Error(ErrorKind::SchemaError, "unknown refiner rule '" + rule + "'");
}

QBasis::QBasis() : entries_{{"1", Refiner::unit()}} {}

QBasis::QBasis(std::vector<BasisEntry> entries) : entries_(std::move(entries)) {
  if (entries_.empty() || entries_[0].refiner.kind != Refiner::Kind::Unit)
    throw Error(ErrorKind::SchemaError, "first basis entry must be the constant 1 (rule \"unit\")");
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (i > 0 && entries_[i].refiner.kind == Refiner::Kind::Unit)
      throw Error(ErrorKind::SchemaError, "only the first basis entry may be the unit");
    for (std::size_t j = 0; j < i; ++j)
      if (entries_[i].label == entries_[j].label)
        throw Error(ErrorKind::SchemaError, "duplicate basis label '" + entries_[i].label + "'");
  }
}

std::shared_ptr<const QBasis> QBasis::with_sqrts(std::span<const Rational> radicands) {
  std::vector<BasisEntry> e{{"1", Refiner::unit()}};
  for (const auto& q : radicands) e.push_back({"sqrt(" + to_string(q) + ")", Refiner::sqrt(q)});
  return std::make_shared<const QBasis>(std::move(e));
}

std::shared_ptr<const QBasis> QBasis::rationals() { return std::make_shared<const QBasis>(); }

bool same_basis(const BasisPtr& a, const BasisPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

QModReal::QModReal(BasisPtr basis, std::vector<Rational> coords)
    : basis_(std::move(basis)), coords_(std::move(coords)) {
  if (!basis_) throw Error(ErrorKind::InvalidArgument, "QModReal without basis");
  if (coords_.size() != basis_->size())
    throw Error(ErrorKind::SchemaError, "scalar has " + std::to_string(coords_.size()) +
                                            " coordinates, basis has " +
                                            std::to_string(basis_->size()));
}

QModReal QModReal::rational(BasisPtr basis, const Rational& q) {
  std::vector<Rational> c(basis->size());
  c[0] = q;
  return QModReal(std::move(basis), std::move(c));
}

QModReal QModReal::zero(BasisPtr basis) { return rational(std::move(basis), 0); }

bool QModReal::is_zero() const {
  return std::all_of(coords_.begin(), coords_.end(), [](const Rational& c) { return c == 0; });
}

bool QModReal::is_rational() const {
  return std::all_of(coords_.begin() + 1, coords_.end(), [](const Rational& c) { return c == 0; });
}

Interval QModReal::enclose(int step) const {
  Interval acc{0, 0};
  for (std::size_t i = 0; i < coords_.size(); ++i)
    if (coords_[i] != 0) acc = acc + coords_[i] * (*basis_)[i].refiner.enclose(step);
  return acc;
}

std::string QModReal::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (coords_[i] == 0) continue;
    Rational c = coords_[i];
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    Rational a = abs(c);
    if (i == 0) os << to_string(a);
    else if (a == 1) os << (*basis_)[i].label;
    else os << to_string(a) << "*" << (*basis_)[i].label;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

bool operator==(const QModReal& a, const QModReal& b) {
  return same_basis(a.basis_, b.basis_) && a.coords_ == b.coords_;
}

namespace {
void require_same(const QModReal& a, const QModReal& b) {
  if (!same_basis(a.basis(), b.basis()))
    throw Error(ErrorKind::MixedBasis, "scalars declared over different bases");
}
}  // namespace

QModReal operator+(const QModReal& a, const QModReal& b) {
  require_same(a, b);
  std::vector<Rational> c(a.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a[i] + b[i];
  return QModReal(a.basis(), std::move(c));
}

QModReal operator-(const QModReal& a) { return Rational(-1) * a; }

QModReal operator-(const QModReal& a, const QModReal& b) { return a + (-b); }

QModReal operator*(const Rational& k, const QModReal& x) {
  std::vector<Rational> c(x.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = k * x[i];
  return QModReal(x.basis(), std::move(c));
}

QModReal qmod_combine(std::span<const Rational> coeffs, std::span<const QModReal> elems) {
  if (coeffs.size() != elems.size() || elems.empty())
    throw Error(ErrorKind::InvalidArgument, "qmod_combine needs equal-length nonempty lists");
  QModReal acc = QModReal::zero(elems[0].basis());
  for (std::size_t i = 0; i < elems.size(); ++i) acc = acc + coeffs[i] * elems[i];
  return acc;
}

std::string_view to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "Negative";
    case Sign::Zero: return "Zero";
    case Sign::Positive: return "Positive";
  }
  return "?";
}

namespace {
template <typename Enclose>
Sign refine_sign(Enclose&& enclose, int cap) {
  for (int step = 0; step <= cap; ++step) {
    Interval iv = enclose(step);
    if (iv.lo > 0) return Sign::Positive;
    if (iv.hi < 0) return Sign::Negative;
  }
  throw Error(ErrorKind::RefinementBudgetExceeded,
              "enclosure still contains 0 after " + std::to_string(cap) +
                  " refinements; the declared basis is probably Q-linearly dependent");
}
}  // namespace

Sign qmod_sign(const QModReal& x, RefineOptions opts) {
  if (x.is_zero()) return Sign::Zero;
  if (x.is_rational()) return x[0] > 0 ? Sign::Positive : Sign::Negative;
  return refine_sign([&](int step) { return x.enclose(step); }, opts.cap);
}

RadicalSum RadicalSum::of(const Rational& coeff, const Rational& radicand) {
  RadicalSum r;
  r.add_term(coeff, radicand);
  return r;
}

RadicalSum RadicalSum::from(const QModReal& x) {
  RadicalSum r;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& ref = (*x.basis())[i].refiner;
    r.add_term(x[i], ref.kind == Refiner::Kind::Unit ? Rational(1) : ref.radicand);
  }
  return r;
}

void RadicalSum::add_term(const Rational& coeff, const Rational& radicand) {
  if (coeff == 0) return;
  // Fold perfect squares into the rational part.
  Rational c = coeff, rad = radicand;
  if (auto s = rational_sqrt(rad)) {
    c *= *s;
    rad = 1;
  }
  for (auto it = terms_.begin(); it != terms_.end(); ++it) {
    if (auto k = rational_sqrt(rad / it->second)) {
      it->first += c * *k;
      if (it->first == 0) terms_.erase(it);
      return;
    }
  }
  terms_.emplace_back(c, rad);
}

RadicalSum& RadicalSum::operator+=(const RadicalSum& other) {
  for (const auto& [c, r] : other.terms_) add_term(c, r);
  return *this;
}

RadicalSum operator-(const RadicalSum& a) {
  RadicalSum r = a;
  for (auto& t : r.terms_) t.first = -t.first;
  return r;
}

RadicalSum operator*(const RadicalSum& a, const RadicalSum& b) {
  RadicalSum r;
  for (const auto& [c1, r1] : a.terms_)
    for (const auto& [c2, r2] : b.terms_) r.add_term(c1 * c2, r1 * r2);
  return r;
}

Interval RadicalSum::enclose(int step) const {
  Interval acc{0, 0};
  for (const auto& [c, r] : terms_) acc = acc + c * sqrt_enclosure(r, step + 1);
  return acc;
}

std::optional<QModReal> RadicalSum::in_basis(const BasisPtr& basis) const {
  std::vector<Rational> coords(basis->size());
  for (const auto& [c, r] : terms_) {
    bool placed = false;
    for (std::size_t i = 0; i < basis->size() && !placed; ++i) {
      const auto& ref = (*basis)[i].refiner;
      Rational br = ref.kind == Refiner::Kind::Unit ? Rational(1) : ref.radicand;
      if (auto k = rational_sqrt(r / br)) {
        coords[i] += c * *k;
        placed = true;
      }
    }
    if (!placed) return std::nullopt;
  }
  return QModReal(basis, std::move(coords));
}

Sign radical_sign(const RadicalSum& x, RefineOptions opts) {
  if (x.is_zero()) return Sign::Zero;
  // Linear independence of square roots of distinct square classes means the
  // loop always terminates; the cap only bounds pathological inputs.
  return refine_sign([&](int step) { return x.enclose(step); }, std::max(opts.cap, 256));
}

QModReal qmod_mul(const QModReal& x, const QModReal& y) {
  require_same(x, y);
  auto p = RadicalSum::from(x) * RadicalSum::from(y);
  auto q = p.in_basis(x.basis());
  if (!q)
    throw Error(ErrorKind::PreconditionViolated, "product leaves the span of the declared basis");
  return *q;
}

}  // namespace isokit
