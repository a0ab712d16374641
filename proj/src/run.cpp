#include "isokit/conformal.hpp"
#include "isokit/error.hpp"
#include "isokit/problem.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <climits>
#include <cmath>
#include <sstream>
#include <thread>

namespace isokit {

namespace {

using ojson = nlohmann::ordered_json;

struct Ctx {
  const ProblemFile& file;
  std::optional<int> order;
  bool order_from_cli = false;
  int bound = 5;
  RefineOptions refine;
  int terms = 6;
  double min_step = 1e-9;
  bool allow_zero = false;
};

struct Outcome {
  bool pass = true;
  ojson body = ojson::object();
  std::vector<std::string> lines;
};

[[noreturn]] void missing(const std::string& what) {
  throw Error(ErrorKind::SchemaError, "instance needs " + what);
}

std::string str(const Rational& q) { return to_string(q); }

std::string join(const std::vector<int>& v, const char* sep = ",") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

std::vector<int> one_based(const std::vector<int>& perm) {
  std::vector<int> out(perm);
  for (int& x : out) ++x;
  return out;
}

std::vector<int> inverse(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inv[perm[k]] = static_cast<int>(k);
  return inv;
}

std::vector<int> identity_perm(std::size_t n) {
  std::vector<int> p(n);
  for (std::size_t k = 0; k < n; ++k) p[k] = static_cast<int>(k);
  return p;
}

std::string weight_label(const WeightedSpec& w, const char* prefix, std::size_t i) {
  return w.label.empty() ? prefix + std::to_string(i + 1) : w.label;
}

// verify

// Positivity of h(z, conj z) is not decided: the constant term is checked
// exactly and h is evaluated exactly on a fixed grid of Gaussian points.
ojson sample_positivity(const HermitianForm& h, std::vector<std::string>& lines) {
  using G = std::pair<Rational, Rational>;
  auto mul = [](const G& a, const G& b) {
    return G{a.first * b.first - a.second * b.second, a.first * b.second + a.second * b.first};
  };
  const std::vector<G> grid{{0, 0},  {1, 0},  {-1, 0}, {0, 1},  {0, -1}, {Rational(1, 2), 0},
                            {2, 0},  {-2, 0}, {1, 1},  {-1, 1}, {0, 3},  {Rational(-1, 3), Rational(1, 2)}};
  const int n = h.n();
  const PolarizedPoly poly = h.to_poly();
  const std::size_t limit = 400;
  std::size_t total = 1;
  for (int i = 0; i < n && total < limit; ++i) total *= grid.size();
  total = std::min(total, limit);

  ojson j;
  j["constant_term_positive"] = h.constant_term() > 0;
  std::optional<std::vector<G>> bad;
  Rational bad_value;
  for (std::size_t s = 0; s < total && !bad; ++s) {
    std::vector<G> z(n);
    std::size_t code = s;
    for (int i = 0; i < n; ++i) {
      z[i] = grid[code % grid.size()];
      code /= grid.size();
    }
    G v{0, 0};
    for (const auto& [e, c] : poly) {
      G t{c, 0};
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < e[i]; ++k) t = mul(t, z[i]);
        for (int k = 0; k < e[n + i]; ++k) t = mul(t, G{z[i].first, -z[i].second});
      }
      v.first += t.first;
      v.second += t.second;
    }
    if (v.first <= 0) {
      bad = z;
      bad_value = v.first;
    }
  }
  j["sampled_points"] = total;
  j["sampled_positive"] = !bad;
  if (bad) {
    ojson pt = ojson::array();
    for (const auto& [re, im] : *bad) pt.push_back(Ext::gaussian(re, im).str());
    j["counterexample"] = {{"z", pt}, {"value", str(bad_value)}};
    lines.push_back("warning: h(z, conj z) = " + str(bad_value) + " <= 0 at a sampled point");
  } else {
    lines.push_back("h positive at " + std::to_string(total) + " sampled points (not a proof)");
  }
  return j;
}

Outcome cmd_verify(const Instance& in, const Ctx& ctx) {
  if (in.F.empty() && in.G.empty()) missing("F or G");
  if (in.h && !in.r) missing("r alongside h");
  if (in.r && !in.h) missing("h alongside r");
  const BasisPtr& basis = ctx.file.basis;

  struct Part {
    std::string label;
    QModReal weight;
    std::optional<HermitianForm> form;
    const PolarizedSeries* series = nullptr;
  };
  std::vector<Part> parts;
  for (int side = 0; side < 2; ++side) {
    const auto& list = side == 0 ? in.F : in.G;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const WeightedSpec& w = list[i];
      Part p{weight_label(w, side == 0 ? "F" : "G", i), side == 0 ? w.weight : -w.weight, {}, nullptr};
      if (w.kind == WeightedSpec::Kind::Map) p.form = form_from_map(w.map);
      if (w.kind == WeightedSpec::Kind::Form) p.form = w.form;
      if (w.kind == WeightedSpec::Kind::Series) p.series = &w.series;
      parts.push_back(std::move(p));
    }
  }
  if (in.h) parts.push_back({"h", -*in.r, *in.h, nullptr});

  bool polynomial = true;
  int max_degree = 0, series_order = INT_MAX;
  for (const auto& p : parts) {
    if (p.form) max_degree = std::max(max_degree, p.form->degree());
    if (p.series) {
      polynomial = false;
      series_order = std::min(series_order, p.series->order());
    }
  }
  int D = ctx.order ? *ctx.order : polynomial ? std::max(2 * max_degree, 2) : series_order;
  Outcome out;
  if (D > series_order) {
    out.lines.push_back("order lowered from " + std::to_string(D) + " to the shortest series order " +
                        std::to_string(series_order));
    D = series_order;
  }
  bool conclusive = polynomial && D >= 2 * max_degree;

  SeriesWithWeights sw;
  for (const auto& p : parts)
    sw.parts.push_back({p.weight, p.form ? p.form->to_series(D) : p.series->truncated(D)});
  auto residual = weighted_log_residual(sw);
  bool zero = all_zero(residual);

  out.body["order"] = D;
  out.body["bound_kind"] = conclusive ? "conclusive (degree bound)" : "verified to order " + std::to_string(D);
  out.body["residual_zero"] = zero;
  if (!zero) {
    ojson res;
    for (std::size_t i = 0; i < residual.size(); ++i)
      if (!residual[i].is_zero()) res[(*basis)[i].label] = residual[i].str();
    out.body["residual"] = res;
  }
  out.pass = zero;
  out.lines.push_back("order D = " + std::to_string(D) + ", " + out.body["bound_kind"].get<std::string>());
  out.lines.push_back(std::string("log residual: ") + (zero ? "zero" : "NONZERO"));

  if (in.h && !in.h->is_constant()) {
    out.body["h_positivity"] = sample_positivity(*in.h, out.lines);
    ojson factors = ojson::array();
    bool all_factored = true;
    QModReal lhs = QModReal::zero(basis);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      const Part& p = parts[i];
      ojson fj;
      fj["label"] = p.label;
      if (!p.form) {
        fj["skipped"] = "series input";
        all_factored = false;
        factors.push_back(fj);
        continue;
      }
      try {
        FactorResult fr = factor_by_h(*p.form, *in.h);
        fj["A"] = str(fr.A);
        fj["m"] = fr.m;
        // parts carry mu_l and -lambda_j, so this accumulates sum mu m - sum lambda n
        lhs = lhs + Rational(fr.m) * p.weight;
        out.lines.push_back(p.label + " = " + str(fr.A) + " * h^" + std::to_string(fr.m));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotAPurePower) throw;
        fj["error"] = bare_message_of(e);
        all_factored = false;
        out.lines.push_back(p.label + ": not a constant times a power of h");
      }
      factors.push_back(fj);
    }
    out.body["factors"] = factors;
    if (all_factored) {
      bool holds = lhs == *in.r;
      out.body["factor_equation"] = {{"sum", lhs.str()}, {"r", in.r->str()}, {"holds", holds}};
      out.lines.push_back("sum mu_l m_l - sum lambda_j n_j = " + lhs.str() + (holds ? " = r" : " != r"));
      out.pass = out.pass && holds;
    } else {
      out.pass = false;
    }
  }
  return out;
}

// cone / factors

ConformalData conformal_data(const Instance& in, const Ctx& ctx, const QModReal& default_r) {
  ConformalData d{ctx.file.basis, in.mu, in.lambda, in.r ? *in.r : default_r};
  return d;
}

Outcome cmd_cone(const Instance& in, const Ctx& ctx) {
  ConformalData d = conformal_data(in, ctx, QModReal::zero(ctx.file.basis));
  d.validate(ctx.refine);
  ConeResult res = cone_condition(d, ctx.refine);
  Outcome out;
  out.pass = res.holds;
  out.body["cone"] = res.holds ? "Holds" : "Violated";
  out.lines.push_back(std::string("cone condition: ") + (res.holds ? "Holds" : "Violated"));
  if (res.witness) {
    ojson c = ojson::array(), dd = ojson::array();
    for (const auto& x : res.witness->c) c.push_back(str(x));
    for (const auto& x : res.witness->d) dd.push_back(str(x));
    out.body["witness"] = {{"c", c}, {"d", dd}, {"value", res.witness->value.str()}};
    out.lines.push_back("witness: sum c_j lambda_j = sum d_l mu_l = " + res.witness->value.str());
  }
  if (!res.note.empty()) {
    out.body["note"] = res.note;
    out.lines.push_back(res.note);
  }
  return out;
}

Outcome cmd_factors(const Instance& in, const Ctx& ctx) {
  ConformalData d = conformal_data(in, ctx, QModReal::rational(ctx.file.basis, 1));
  auto sols = solve_factor_equation(d, ctx.bound, ctx.allow_zero);
  Outcome out;
  out.pass = !sols.empty();
  ojson list = ojson::array();
  for (const auto& s : sols) {
    list.push_back({{"m", s.m}, {"n", s.n}});
    out.lines.push_back("m = (" + join(s.m) + "), n = (" + join(s.n) + ")");
  }
  out.body["r"] = d.r.str();
  out.body["bound"] = ctx.bound;
  out.body["solutions"] = list;
  out.lines.insert(out.lines.begin(), std::to_string(sols.size()) + " solution(s) with entries in [" +
                                          (ctx.allow_zero ? "0" : "1") + ", " + std::to_string(ctx.bound) + "]");
  return out;
}

// veronese / resolvable / factor

Outcome cmd_veronese(const Instance& in, const Ctx&) {
  if (!in.k) missing("k");
  const int n = in.dim, k = *in.k;
  MapTuple V = veronese(n, k);
  HermitianForm lhs = form_from_map(V);
  HermitianForm base = form_from_map(identity_map(n));
  bool identity = lhs == form_power(base, static_cast<unsigned>(k));
  Rational expected = binomial(Rational(n + k), k) - 1;
  bool count_ok = Rational(static_cast<long>(V.dimension())) == expected;
  BasisPtr q = QBasis::rationals();
  SeriesWithWeights sw;
  sw.parts.push_back({QModReal::rational(q, 1), lhs.to_series(2 * std::max(k, 1))});
  sw.parts.push_back({QModReal::rational(q, -k), base.to_series(2 * std::max(k, 1))});
  bool residual_zero = all_zero(weighted_log_residual(sw));

  Outcome out;
  out.pass = identity && count_ok && residual_zero;
  out.body["n"] = n;
  out.body["k"] = k;
  out.body["components"] = V.dimension();
  out.body["expected_components"] = str(expected);
  out.body["form_identity"] = identity;
  out.body["log_residual_zero"] = residual_zero;
  ojson comps = ojson::array();
  for (const auto& c : V.components()) comps.push_back(component_str(c));
  out.body["map"] = comps;
  out.lines.push_back(std::to_string(V.dimension()) + " components (expected " + str(expected) + ")");
  out.lines.push_back(std::string("1 + |V(z)|^2 = (1 + |z|^2)^") + std::to_string(k) + ": " +
                      (identity ? "yes" : "NO"));
  out.lines.push_back(std::string("log residual with conformal constant ") + std::to_string(k) + ": " +
                      (residual_zero ? "zero" : "NONZERO"));
  return out;
}

Outcome cmd_resolvable(const Instance& in, const Ctx& ctx) {
  if (!in.potential) missing("potential");
  const PotentialSpec& p = *in.potential;
  ResolvableResult res;
  Outcome out;
  switch (p.kind) {
    case PotentialSpec::Kind::Form:
      res = resolvable_check(p.form);
      break;
    case PotentialSpec::Kind::Series: {
      int D = ctx.order ? std::min(*ctx.order, p.series.order()) : p.series.order();
      out.body["order"] = D;
      res = resolvable_check(p.series.truncated(D), D);
      break;
    }
    case PotentialSpec::Kind::Power: {
      std::optional<int> order = ctx.order_from_cli || !p.order ? ctx.order : p.order;
      if (!order) missing("an order to expand a power");
      int D = *order;
      if (p.form.constant_term() != 1)
        throw Error(ErrorKind::NonUnitConstantTerm, "the base of a power needs constant term 1");
      PolarizedSeries s = p.form.to_series(D) - PolarizedSeries::constant(p.form.n(), D, 1);
      out.body["order"] = D;
      res = resolvable_check(series_binomial_pow(s, p.exponent, D), D);
      break;
    }
  }
  out.pass = res.resolvable;
  out.body["resolvable"] = res.resolvable;
  ojson piv = ojson::array();
  for (const auto& pv : res.pivots) piv.push_back({{"monomial", monomial_str(pv.monomial)}, {"value", str(pv.value)}});
  out.body["pivots"] = piv;
  if (res.resolvable) {
    ojson comps = ojson::array();
    for (const auto& c : res.witness.components()) comps.push_back(component_str(c));
    out.body["map"] = comps;
    out.lines.push_back("resolvable: 1 + |F|^2 with F of " + std::to_string(res.witness.dimension()) +
                        " components");
  } else {
    out.body["failure"] = {{"z", monomial_str(res.fail_z)},
                           {"xi", monomial_str(res.fail_xi, "xi")},
                           {"value", str(res.fail_value)}};
    out.lines.push_back("not resolvable: entry at (" + monomial_str(res.fail_z) + ", " +
                        monomial_str(res.fail_xi, "xi") + ") has value " + str(res.fail_value));
  }
  return out;
}

Outcome cmd_factor(const Instance& in, const Ctx&) {
  if (!in.P) missing("P");
  if (!in.h) missing("h");
  Outcome out;
  try {
    FactorResult fr = factor_by_h(*in.P, *in.h);
    out.body["A"] = str(fr.A);
    out.body["m"] = fr.m;
    out.lines.push_back("P = " + str(fr.A) + " * h^" + std::to_string(fr.m));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NotAPurePower) throw;
    out.pass = false;
    out.body["error"] = std::string(e.what());
    out.lines.push_back(e.what());
  }
  return out;
}

// Algebraic functions.

const AlgebraicFunction& need_poly(const Instance& in) {
  if (!in.poly) missing("poly");
  return *in.poly;
}

struct Site {
  std::string label;
  std::optional<Center> center;
};

// The requested point, or every locus point with an exact value plus infinity.
std::vector<Site> sites(const AlgebraicFunction& f, const Instance& in) {
  std::vector<Site> out;
  if (in.center && !in.center->locus_index) {
    Center c = in.center->infinity ? Center::at_infinity() : Center::at(*in.center->value);
    out.push_back({c.str(), c});
    return out;
  }
  BranchLocus locus = branch_locus(f);
  auto add = [&](std::size_t k) {
    const LocusPoint& p = locus.points[k];
    Site s{p.value ? p.value->str() : p.str(), std::nullopt};
    if (p.value) s.center = Center::at(*p.value);
    out.push_back(s);
  };
  if (in.center) {
    std::size_t k = static_cast<std::size_t>(*in.center->locus_index - 1);
    if (k >= locus.points.size())
      throw Error(ErrorKind::InvalidArgument, "locus index " + std::to_string(k + 1) + " out of range (" +
                                                  std::to_string(locus.points.size()) + " points)");
    add(k);
    return out;
  }
  for (std::size_t k = 0; k < locus.points.size(); ++k) add(k);
  out.push_back({"infinity", Center::at_infinity()});
  return out;
}

std::string exponent_str(int i, int N) { return str(Rational(i, N)); }

ojson locus_json(const BranchLocus& locus) {
  ojson pts = ojson::array();
  for (std::size_t k = 0; k < locus.points.size(); ++k) {
    const LocusPoint& p = locus.points[k];
    ojson j;
    j["index"] = k + 1;
    j["poly"] = p.poly.str();
    if (p.value) j["value"] = p.value->str();
    j["box"] = {{"re", {str(p.box.re_lo), str(p.box.re_hi)}}, {"im", {str(p.box.im_lo), str(p.box.im_hi)}}};
    pts.push_back(j);
  }
  return {{"points", pts}, {"includes_infinity", locus.includes_infinity}};
}

Outcome cmd_puiseux(const Instance& in, const Ctx& ctx) {
  const AlgebraicFunction& f = need_poly(in);
  const int terms = in.terms ? *in.terms : ctx.terms;
  Outcome out;
  out.body["poly"] = f.str();
  ojson list = ojson::array();
  for (const Site& site : sites(f, in)) {
    ojson sj;
    sj["center"] = site.label;
    if (!site.center) {
      sj["skipped"] = "point not in the supported coefficient field";
      out.lines.push_back("at " + site.label + ": skipped (outside the supported field)");
      list.push_back(sj);
      continue;
    }
    std::vector<PuiseuxSeries> cycles;
    try {
      cycles = newton_puiseux(f, *site.center, terms);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnsupportedCoefficientField || in.center) throw;
      sj["skipped"] = bare_message_of(e);
      out.lines.push_back("at " + site.label + ": skipped (" + bare_message_of(e) + ")");
      list.push_back(sj);
      continue;
    }
    int branches = 0;
    ojson cj = ojson::array();
    out.lines.push_back("at " + site.label + ":");
    for (const PuiseuxSeries& s : cycles) {
      branches += s.ramification;
      int g = guaranteed_order(f, s);
      bool ok = true;
      for (const auto& [idx, c] : substitution_residual(f, s))
        if (idx < g && !c.is_zero()) ok = false;
      out.pass = out.pass && ok;
      ojson tj = ojson::array();
      for (const auto& [idx, c] : s.terms) tj.push_back({{"index", idx}, {"coeff", c.str()}});
      ojson j;
      j["ramification"] = s.ramification;
      j["leading_exponent"] = exponent_str(s.leading_index(), s.ramification);
      j["leading_coeff"] = s.leading_coeff().str();
      j["scale"] = s.scale.str();
      j["terms"] = tj;
      j["precision"] = s.precision;
      j["exact"] = s.exact;
      if (g == INT_MAX)
        j["residual_vanishes"] = "identically";
      else
        j["residual_vanishes_below"] = g;
      j["residual_ok"] = ok;
      cj.push_back(j);
      std::string scale = s.scale == Ext(1) ? "" : s.scale.str() + "*";
      std::string local = site.center->infinity ? "1/z = " + scale : "z - " + site.label + " = " + scale;
      out.lines.push_back("  N = " + std::to_string(s.ramification) + ", " + local + "t^" +
                          std::to_string(s.ramification) + ", leading exponent " +
                          exponent_str(s.leading_index(), s.ramification) + ": Y = " + s.str() +
                          (ok ? "" : "  [RESIDUAL CHECK FAILED]"));
    }
    sj["branches"] = branches;
    sj["cycles"] = cj;
    if (branches != f.degree()) {
      out.pass = false;
      out.lines.push_back("  branch count " + std::to_string(branches) + " != degree " +
                          std::to_string(f.degree()));
    }
    list.push_back(sj);
  }
  out.body["expansions"] = list;
  return out;
}

ojson action_json(const MonodromyAction& a) {
  ojson j;
  j["basepoint"] = a.basepoint.str();
  j["permutation"] = one_based(a.permutation);
  j["cycle_type"] = cycle_type(a.permutation);
  j["diagnostics"] = {{"note", "floating-point path data"},
                      {"max_endpoint_mismatch", a.residual},
                      {"min_root_separation", a.separation},
                      {"steps", a.steps}};
  return j;
}

std::vector<int> ramification_type(const AlgebraicFunction& f, const Center& c) {
  std::vector<int> r;
  for (const auto& s : newton_puiseux(f, c, 1)) r.push_back(s.ramification);
  std::sort(r.rbegin(), r.rend());
  return r;
}

Outcome cmd_monodromy(const Instance& in, const Ctx& ctx) {
  const AlgebraicFunction& f = need_poly(in);
  BranchLocus locus = branch_locus(f);
  MonodromyOptions mo;
  mo.min_step = ctx.min_step;
  Outcome out;
  out.body["poly"] = f.str();
  out.body["locus"] = locus_json(locus);
  out.lines.push_back(std::to_string(locus.points.size()) + " finite branch point(s)" +
                      (locus.includes_infinity ? ", branching at infinity" : ""));

  if (in.loop) {
    MonodromyAction a = monodromy(f, *in.loop, locus, mo);
    out.body["action"] = action_json(a);
    out.lines.push_back("permutation (" + join(one_based(a.permutation), " ") + "), cycle type (" +
                        join(cycle_type(a.permutation)) + ")");
    return out;
  }
  if (locus.points.empty()) {
    out.body["composition_identity"] = true;
    out.lines.push_back("no finite branch points: every loop acts trivially");
    return out;
  }

  // One lasso per point from a shared basepoint, then the circle through the
  // basepoint enclosing everything, which is the loop around infinity reversed.
  Loop lasso;
  lasso.kind = Loop::Kind::Lassos;
  lasso.loci = {0};
  std::vector<MonodromyAction> acts;
  acts.push_back(monodromy(f, lasso, locus, mo));
  const Ext b = acts[0].basepoint;
  lasso.basepoint = b;
  for (std::size_t k = 1; k < locus.points.size(); ++k) {
    lasso.loci = {static_cast<int>(k)};
    acts.push_back(monodromy(f, lasso, locus, mo));
  }
  const Complex bc = b.approx();
  std::vector<std::pair<double, std::size_t>> by_angle;
  double need = 0;
  for (std::size_t k = 0; k < locus.points.size(); ++k) {
    Complex d = locus.points[k].approx - bc;
    by_angle.push_back({std::arg(d), k});
    need = std::max(need, std::norm(d) / (2 * d.imag()));
  }
  std::sort(by_angle.begin(), by_angle.end());
  std::vector<int> product = identity_perm(f.degree());
  for (const auto& [angle, k] : by_angle) product = compose(product, acts[k].permutation);

  Loop big;
  big.kind = Loop::Kind::Circle;
  big.radius = Rational(static_cast<long>(std::ceil(1.5 * need + 1)));
  big.center = Ext::gaussian(b.a(), b.c() + big.radius);
  MonodromyAction around = monodromy(f, big, locus, mo);
  std::vector<int> at_infinity = inverse(around.permutation);
  bool identity = compose(product, at_infinity) == identity_perm(f.degree());
  out.pass = identity;

  ojson pts = ojson::array();
  for (std::size_t k = 0; k < locus.points.size(); ++k) {
    ojson j = action_json(acts[k]);
    j["index"] = k + 1;
    if (auto v = locus.points[k].value) {
      auto r = ramification_type(f, Center::at(*v));
      bool match = r == cycle_type(acts[k].permutation);
      j["ramification"] = r;
      j["matches_ramification"] = match;
      out.pass = out.pass && match;
    }
    pts.push_back(j);
    out.lines.push_back("around point " + std::to_string(k + 1) + " (" + locus.points[k].str() + "): (" +
                        join(one_based(acts[k].permutation), " ") + ")");
  }
  ojson order = ojson::array();
  for (const auto& [angle, k] : by_angle) order.push_back(k + 1);
  ojson inf = action_json(around);
  inf["permutation_at_infinity"] = one_based(at_infinity);
  try {
    auto r = ramification_type(f, Center::at_infinity());
    bool match = r == cycle_type(at_infinity);
    inf["ramification"] = r;
    inf["matches_ramification"] = match;
    out.pass = out.pass && match;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnsupportedCoefficientField) throw;
  }
  out.body["lassos"] = pts;
  out.body["lasso_order"] = order;
  out.body["enclosing_circle"] = inf;
  out.body["composition_identity"] = identity;
  out.lines.push_back("around infinity: (" + join(one_based(at_infinity), " ") + ")");
  out.lines.push_back(std::string("product over all points including infinity: ") +
                      (identity ? "identity" : "NOT the identity"));
  return out;
}

Outcome cmd_classify(const Instance& in, const Ctx& ctx) {
  const AlgebraicFunction& f = need_poly(in);
  const int terms = std::max(in.terms ? *in.terms : ctx.terms, 16);
  Outcome out;
  out.body["poly"] = f.str();
  ojson list = ojson::array();
  for (const Site& site : sites(f, in)) {
    ojson sj;
    sj["center"] = site.label;
    if (!site.center) {
      sj["skipped"] = "point not in the supported coefficient field";
      out.lines.push_back("at " + site.label + ": skipped (outside the supported field)");
      list.push_back(sj);
      continue;
    }
    BranchingClass bc;
    try {
      bc = classify_branching(f, *site.center, terms);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnsupportedCoefficientField || in.center) throw;
      sj["skipped"] = bare_message_of(e);
      out.lines.push_back("at " + site.label + ": skipped (" + bare_message_of(e) + ")");
      list.push_back(sj);
      continue;
    }
    if (bc.kind == BranchingClass::Kind::Inconclusive) out.pass = false;
    sj["class"] = std::string(to_string(bc.kind));
    if (bc.kind == BranchingClass::Kind::SimpleCyclic) sj["period"] = bc.period;
    ojson cj = ojson::array();
    for (const auto& c : bc.cycles) {
      ojson j;
      j["ramification"] = c.ramification;
      j["leading_exponent"] = exponent_str(c.leading_index, c.ramification);
      j["period"] = c.period;
      j["proven"] = c.proven;
      if (c.witness_index) j["witness_index"] = *c.witness_index;
      cj.push_back(j);
    }
    sj["cycles"] = cj;
    list.push_back(sj);
    std::string line = "at " + site.label + ": " + std::string(to_string(bc.kind));
    if (bc.kind == BranchingClass::Kind::SimpleCyclic) line += ", period " + std::to_string(bc.period);
    out.lines.push_back(line);
  }
  out.body["points"] = list;
  return out;
}

Outcome cmd_example62(const Instance& in, const Ctx& ctx) {
  Example62Input e{in.mu, in.lambda, in.m, in.n, in.m_prime, in.n_prime, in.f ? *in.f : MapTuple(in.dim),
                   in.dim};
  IdentityInstance id = example62_construct(e);
  int D = ctx.order ? *ctx.order : std::max(2 * id.max_degree(), 2);
  bool zero = all_zero(weighted_log_residual(id.to_series(D)));
  Outcome out;
  out.pass = zero;
  ojson fs = ojson::array();
  for (const auto& w : id.factors) {
    fs.push_back({{"label", w.label},
                  {"weight", w.weight.str()},
                  {"components", w.map.dimension()},
                  {"degree", w.form.degree()}});
    out.lines.push_back(w.label + ": weight " + w.weight.str() + ", " + std::to_string(w.map.dimension()) +
                        " component(s), degree " + std::to_string(w.form.degree()));
  }
  out.body["factors"] = fs;
  out.body["order"] = D;
  out.body["bound_kind"] =
      D >= 2 * id.max_degree() ? "conclusive (degree bound)" : "verified to order " + std::to_string(D);
  out.body["residual_zero"] = zero;
  out.lines.push_back("log residual to order " + std::to_string(D) + ": " + (zero ? "zero" : "NONZERO"));
  return out;
}

Outcome dispatch(Command c, const Instance& in, const Ctx& ctx) {
  switch (c) {
    case Command::Verify: return cmd_verify(in, ctx);
    case Command::Cone: return cmd_cone(in, ctx);
    case Command::Factors: return cmd_factors(in, ctx);
    case Command::Veronese: return cmd_veronese(in, ctx);
    case Command::Resolvable: return cmd_resolvable(in, ctx);
    case Command::Factor: return cmd_factor(in, ctx);
    case Command::Puiseux: return cmd_puiseux(in, ctx);
    case Command::Monodromy: return cmd_monodromy(in, ctx);
    case Command::Classify: return cmd_classify(in, ctx);
    case Command::Example62: return cmd_example62(in, ctx);
  }
  throw Error(ErrorKind::Internal, "unknown command");
}

const char* status_str(InstanceReport::Status s) {
  switch (s) {
    case InstanceReport::Status::Pass: return "pass";
    case InstanceReport::Status::Fail: return "fail";
    case InstanceReport::Status::Error: return "error";
  }
  return "error";
}

InstanceReport run_one(Command c, const Instance& in, std::size_t index, const Ctx& ctx) {
  InstanceReport r;
  ojson j;
  j["index"] = index + 1;
  if (!in.name.empty()) j["name"] = in.name;
  std::string head = "[" + std::to_string(index + 1) + "]" + (in.name.empty() ? "" : " " + in.name);
  try {
    Outcome o = dispatch(c, in, ctx);
    r.status = o.pass ? InstanceReport::Status::Pass : InstanceReport::Status::Fail;
    j["status"] = status_str(r.status);
    for (auto& [k, v] : o.body.items()) j[k] = v;
    r.lines.push_back(head + ": " + (o.pass ? "PASS" : "FAIL"));
    for (auto& l : o.lines) r.lines.push_back("    " + l);
  } catch (const Error& e) {
    r.status = InstanceReport::Status::Error;
    r.error = e.kind();
    j["status"] = "error";
    j["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
    r.lines.push_back(head + ": ERROR instance " + std::to_string(index + 1) + ": " + e.what());
  }
  r.json = j.dump();
  return r;
}

}  // namespace

std::string bare_message_of(const Error& e) {
  std::string w = e.what();
  std::string prefix = std::string(to_string(e.kind())) + ": ";
  return w.rfind(prefix, 0) == 0 ? w.substr(prefix.size()) : w;
}

bool is_input_error(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SyntaxError:
    case ErrorKind::SchemaError:
    case ErrorKind::InvalidArgument:
    case ErrorKind::MixedBasis:
    case ErrorKind::NonPositiveEntry:
    case ErrorKind::PreconditionViolated:
    case ErrorKind::AsymmetricInput:
    case ErrorKind::NotSquareFree:
    case ErrorKind::NotPrimitive:
    case ErrorKind::IrrationalGramEntry:
    case ErrorKind::NonUnitConstantTerm:
    case ErrorKind::NonzeroConstantTerm:
      return true;
    default:
      return false;
  }
}

namespace {
constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::Verify, "verify"},         {Command::Cone, "cone"},
    {Command::Factors, "factors"},       {Command::Veronese, "veronese"},
    {Command::Resolvable, "resolvable"}, {Command::Factor, "factor"},
    {Command::Puiseux, "puiseux"},       {Command::Monodromy, "monodromy"},
    {Command::Classify, "classify"},     {Command::Example62, "example62"},
};
}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [c, n] : kCommands)
    if (n == name) return c;
  return std::nullopt;
}

std::string_view to_string(Command c) {
  for (const auto& [k, n] : kCommands)
    if (k == c) return n;
  return "?";
}

int Report::exit_code() const {
  int code = 0;
  for (const auto& r : instances) {
    if (r.status == InstanceReport::Status::Error && r.error && is_input_error(*r.error)) return 2;
    if (r.status != InstanceReport::Status::Pass) code = 1;
  }
  return code;
}

std::string Report::to_json() const {
  ojson root;
  root["command"] = std::string(to_string(command));
  ojson list = ojson::array();
  int pass = 0, fail = 0, err = 0;
  for (const auto& r : instances) {
    list.push_back(ojson::parse(r.json));
    if (r.status == InstanceReport::Status::Pass) ++pass;
    if (r.status == InstanceReport::Status::Fail) ++fail;
    if (r.status == InstanceReport::Status::Error) ++err;
  }
  root["instances"] = list;
  root["summary"] = {{"passed", pass}, {"failed", fail}, {"errors", err}};
  root["exit_code"] = exit_code();
  return root.dump(2) + "\n";
}

std::string Report::to_text() const {
  std::ostringstream os;
  int pass = 0;
  for (const auto& r : instances) {
    for (const auto& l : r.lines) os << l << "\n";
    if (r.status == InstanceReport::Status::Pass) ++pass;
  }
  os << to_string(command) << ": " << pass << "/" << instances.size() << " instance(s) passed\n";
  return os.str();
}

Report run(const ProblemFile& file, Command command, const RunOptions& opts) {
  Ctx ctx{file, std::nullopt, false, 5, RefineOptions{}, 6, 1e-9, false};
  ctx.order = opts.order ? opts.order : file.options.order;
  ctx.order_from_cli = opts.order.has_value();
  ctx.bound = opts.bound ? *opts.bound : file.options.bound;
  ctx.refine.cap = opts.refine_cap ? *opts.refine_cap : file.options.refine_cap;
  ctx.terms = file.options.terms;
  ctx.min_step = file.options.min_step;
  ctx.allow_zero = file.options.allow_zero;

  Report report;
  report.command = command;
  report.instances.resize(file.instances.size());
  const std::size_t n = file.instances.size();
  const std::size_t workers = std::min<std::size_t>(std::max(opts.jobs, 1), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) report.instances[i] = run_one(command, file.instances[i], i, ctx);
    return report;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++)
        report.instances[i] = run_one(command, file.instances[i], i, ctx);
    });
  for (auto& t : pool) t.join();
  return report;
}

}  // namespace isokit
