#include "isokit/problem.hpp"

#include "isokit/error.hpp"
#include "isokit/expr.hpp"

#include <json.hpp>

#include <algorithm>
#include <climits>

namespace isokit {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::SchemaError, (path.empty() ? std::string("/") : path) + ": " + msg);
}

// Runs fn, attaching `path` to any library error it raises.
template <class Fn>
auto at_path(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const SyntaxError& e) {
    std::string ctx = path;
    if (!e.context().empty()) ctx += ", " + e.context();
    throw SyntaxError(e.line(), e.column(), e.expected(), ctx);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::SchemaError) throw;
    throw Error(e.kind(), path + ": " + bare_message_of(e));
  }
}

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string child(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) schema_error(path, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    if (!ok) schema_error(child(path, key), "unknown field");
  }
}

int get_int(const json& j, const std::string& path, int min = INT_MIN) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  auto v = j.get<long long>();
  if (v < min || v > INT_MAX) schema_error(path, "integer out of range");
  return static_cast<int>(v);
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) schema_error(path, "expected true or false");
  return j.get<bool>();
}

const json& get_array(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected a list");
  return j;
}

std::vector<int> get_ints(const json& j, const std::string& path) {
  std::vector<int> out;
  for (std::size_t i = 0; i < get_array(j, path).size(); ++i) out.push_back(get_int(j[i], child(path, i)));
  return out;
}

Rational get_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (j.is_string()) {
    std::string text = j.get<std::string>();
    return at_path(path, [&] { return parse_rational(text); });
  }
  schema_error(path, "expected a rational \"p/q\"");
}

QModReal get_scalar(const json& j, const std::string& path, const BasisPtr& basis) {
  if (!j.is_array()) return QModReal::rational(basis, get_rational(j, path));
  if (j.size() != basis->size())
    schema_error(path, "expected " + std::to_string(basis->size()) + " coordinates, got " +
                           std::to_string(j.size()));
  std::vector<Rational> coords;
  for (std::size_t i = 0; i < j.size(); ++i) coords.push_back(get_rational(j[i], child(path, i)));
  return QModReal(basis, std::move(coords));
}

std::vector<QModReal> get_scalars(const json& j, const std::string& path, const BasisPtr& basis) {
  std::vector<QModReal> out;
  for (std::size_t i = 0; i < get_array(j, path).size(); ++i)
    out.push_back(get_scalar(j[i], child(path, i), basis));
  return out;
}

HermitianForm get_form(const json& j, const std::string& path, int dim) {
  std::string text = get_string(j, path);
  return at_path(path, [&] { return HermitianForm::from_poly(dim, parse_polarized(text, dim)); });
}

MapTuple get_map(const json& j, const std::string& path, int dim) {
  std::vector<MapComponent> comps;
  for (std::size_t i = 0; i < get_array(j, path).size(); ++i) {
    std::string text = get_string(j[i], child(path, i));
    comps.push_back(at_path(child(path, i), [&] { return parse_component(text, dim); }));
  }
  return at_path(path, [&] { return MapTuple(dim, std::move(comps)); });
}

PolarizedSeries get_series(const json& terms, const json& order, const std::string& path, int dim) {
  PolarizedSeries s(dim, get_int(order, child(path, "order"), 0));
  const std::string tpath = child(path, "series");
  for (std::size_t i = 0; i < get_array(terms, tpath).size(); ++i) {
    const std::string p = child(tpath, i);
    check_keys(terms[i], p, {"z_exp", "xi_exp", "coeff"});
    if (!terms[i].contains("z_exp") || !terms[i].contains("xi_exp") || !terms[i].contains("coeff"))
      schema_error(p, "a series term needs z_exp, xi_exp and coeff");
    auto z = get_ints(terms[i]["z_exp"], child(p, "z_exp"));
    auto xi = get_ints(terms[i]["xi_exp"], child(p, "xi_exp"));
    if (static_cast<int>(z.size()) != dim || static_cast<int>(xi.size()) != dim)
      schema_error(p, "exponent lists must have length " + std::to_string(dim));
    for (int e : z)
      if (e < 0) schema_error(child(p, "z_exp"), "negative exponent");
    for (int e : xi)
      if (e < 0) schema_error(child(p, "xi_exp"), "negative exponent");
    Exponents e = z;
    e.insert(e.end(), xi.begin(), xi.end());
    s.add(e, get_rational(terms[i]["coeff"], child(p, "coeff")));
  }
  return s;
}

PointSpec get_point(const json& j, const std::string& path) {
  PointSpec p;
  if (j.is_number_integer()) {
    p.locus_index = get_int(j, path, 1);
    return p;
  }
  std::string text = get_string(j, path);
  if (text == "infinity") {
    p.infinity = true;
    return p;
  }
  p.value = at_path(path, [&] { return parse_point(text); });
  return p;
}

Ext get_exact_point(const json& j, const std::string& path) {
  std::string text = get_string(j, path);
  return at_path(path, [&] { return parse_point(text); });
}

Loop get_loop(const json& j, const std::string& path) {
  check_keys(j, path, {"circle", "lassos", "basepoint", "reversed"});
  Loop loop;
  if (j.contains("circle") == j.contains("lassos")) schema_error(path, "give exactly one of circle or lassos");
  if (j.contains("circle")) {
    const std::string p = child(path, "circle");
    check_keys(j["circle"], p, {"center", "radius"});
    if (!j["circle"].contains("radius")) schema_error(p, "missing field radius");
    loop.kind = Loop::Kind::Circle;
    loop.center = j["circle"].contains("center") ? get_exact_point(j["circle"]["center"], child(p, "center"))
                                                 : Ext(0);
    loop.radius = get_rational(j["circle"]["radius"], child(p, "radius"));
    if (loop.radius <= 0) schema_error(child(p, "radius"), "radius must be positive");
    if (j.contains("basepoint")) schema_error(child(path, "basepoint"), "a circle starts at center - i*radius");
  } else {
    loop.kind = Loop::Kind::Lassos;
    const std::string p = child(path, "lassos");
    for (std::size_t i = 0; i < get_array(j["lassos"], p).size(); ++i)
      loop.loci.push_back(get_int(j["lassos"][i], child(p, i), 1) - 1);
    if (j.contains("basepoint")) loop.basepoint = get_exact_point(j["basepoint"], child(path, "basepoint"));
  }
  if (j.contains("reversed")) loop.reversed = get_bool(j["reversed"], child(path, "reversed"));
  return loop;
}

WeightedSpec get_weighted(const json& j, const std::string& path, int dim, const BasisPtr& basis) {
  check_keys(j, path, {"label", "weight", "map", "form", "series", "order"});
  WeightedSpec w;
  if (j.contains("label")) w.label = get_string(j["label"], child(path, "label"));
  if (!j.contains("weight")) schema_error(path, "missing field weight");
  w.weight = get_scalar(j["weight"], child(path, "weight"), basis);
  int kinds = int(j.contains("map")) + int(j.contains("form")) + int(j.contains("series"));
  if (kinds != 1) schema_error(path, "give exactly one of map, form or series");
  if (j.contains("map")) {
    w.kind = WeightedSpec::Kind::Map;
    w.map = get_map(j["map"], child(path, "map"), dim);
  } else if (j.contains("form")) {
    w.kind = WeightedSpec::Kind::Form;
    w.form = get_form(j["form"], child(path, "form"), dim);
  } else {
    w.kind = WeightedSpec::Kind::Series;
    if (!j.contains("order")) schema_error(path, "a series needs an order");
    w.series = get_series(j["series"], j["order"], path, dim);
  }
  if (w.kind != WeightedSpec::Kind::Series && j.contains("order"))
    schema_error(child(path, "order"), "only a series takes an order");
  return w;
}

PotentialSpec get_potential(const json& j, const std::string& path, int dim) {
  check_keys(j, path, {"form", "series", "order", "power", "exponent"});
  PotentialSpec p;
  int kinds = int(j.contains("form")) + int(j.contains("series")) + int(j.contains("power"));
  if (kinds != 1) schema_error(path, "give exactly one of form, series or power");
  if (j.contains("form")) {
    p.kind = PotentialSpec::Kind::Form;
    p.form = get_form(j["form"], child(path, "form"), dim);
  } else if (j.contains("series")) {
    p.kind = PotentialSpec::Kind::Series;
    if (!j.contains("order")) schema_error(path, "a series needs an order");
    p.series = get_series(j["series"], j["order"], path, dim);
  } else {
    p.kind = PotentialSpec::Kind::Power;
    p.form = get_form(j["power"], child(path, "power"), dim);
    if (!j.contains("exponent")) schema_error(path, "missing field exponent");
    p.exponent = get_rational(j["exponent"], child(path, "exponent"));
    if (j.contains("order")) p.order = get_int(j["order"], child(path, "order"), 0);
  }
  if (p.kind == PotentialSpec::Kind::Form && j.contains("order"))
    schema_error(child(path, "order"), "a form takes no order");
  if (p.kind != PotentialSpec::Kind::Power && j.contains("exponent"))
    schema_error(child(path, "exponent"), "only a power takes an exponent");
  return p;
}

Instance get_instance(const json& j, const std::string& path, const BasisPtr& basis) {
  check_keys(j, path,
             {"name", "dim", "mu", "lambda", "r", "h", "F", "G", "potential", "P", "k", "m", "n", "m_prime",
              "n_prime", "f", "poly", "center", "loop", "terms"});
  Instance in;
  auto has = [&](const char* k) { return j.contains(k); };
  auto p = [&](const char* k) { return child(path, k); };
  if (has("name")) in.name = get_string(j["name"], p("name"));
  if (has("dim")) in.dim = get_int(j["dim"], p("dim"), 1);
  if (has("mu")) in.mu = get_scalars(j["mu"], p("mu"), basis);
  if (has("lambda")) in.lambda = get_scalars(j["lambda"], p("lambda"), basis);
  if (has("r")) in.r = get_scalar(j["r"], p("r"), basis);
  if (has("h")) in.h = get_form(j["h"], p("h"), in.dim);
  for (const char* key : {"F", "G"}) {
    if (!has(key)) continue;
    auto& out = key[0] == 'F' ? in.F : in.G;
    for (std::size_t i = 0; i < get_array(j[key], p(key)).size(); ++i)
      out.push_back(get_weighted(j[key][i], child(p(key), i), in.dim, basis));
  }
  if (has("potential")) in.potential = get_potential(j["potential"], p("potential"), in.dim);
  if (has("P")) in.P = get_form(j["P"], p("P"), in.dim);
  if (has("k")) in.k = get_int(j["k"], p("k"), 0);
  if (has("m")) in.m = get_ints(j["m"], p("m"));
  if (has("n")) in.n = get_ints(j["n"], p("n"));
  if (has("m_prime")) in.m_prime = get_ints(j["m_prime"], p("m_prime"));
  if (has("n_prime")) in.n_prime = get_ints(j["n_prime"], p("n_prime"));
  if (has("f")) in.f = get_map(j["f"], p("f"), in.dim);
  if (has("poly")) {
    std::string text = get_string(j["poly"], p("poly"));
    in.poly = at_path(p("poly"), [&] { return parse_algebraic(text); });
  }
  if (has("center")) in.center = get_point(j["center"], p("center"));
  if (has("loop")) in.loop = get_loop(j["loop"], p("loop"));
  if (has("terms")) in.terms = get_int(j["terms"], p("terms"), 1);
  return in;
}

// Printing.

std::string str(const Rational& q) { return to_string(q); }

ojson scalar_json(const QModReal& x) {
  ojson a = ojson::array();
  for (const auto& c : x.coords()) a.push_back(str(c));
  return a;
}

ojson scalars_json(const std::vector<QModReal>& xs) {
  ojson a = ojson::array();
  for (const auto& x : xs) a.push_back(scalar_json(x));
  return a;
}

ojson map_json(const MapTuple& f) {
  ojson a = ojson::array();
  for (const auto& c : f.components()) a.push_back(component_str(c));
  return a;
}

ojson series_terms_json(const PolarizedSeries& s) {
  ojson a = ojson::array();
  const std::size_t n = static_cast<std::size_t>(s.n());
  for (const auto& [e, c] : s.terms()) {
    ojson t;
    t["z_exp"] = std::vector<int>(e.begin(), e.begin() + n);
    t["xi_exp"] = std::vector<int>(e.begin() + n, e.end());
    t["coeff"] = str(c);
    a.push_back(t);
  }
  return a;
}

ojson point_json(const PointSpec& p) {
  if (p.infinity) return "infinity";
  if (p.locus_index) return *p.locus_index;
  return p.value->str();
}

ojson loop_json(const Loop& l) {
  ojson j;
  if (l.kind == Loop::Kind::Circle) {
    j["circle"] = {{"center", l.center.str()}, {"radius", str(l.radius)}};
  } else {
    ojson idx = ojson::array();
    for (int k : l.loci) idx.push_back(k + 1);
    j["lassos"] = idx;
    if (l.basepoint) j["basepoint"] = l.basepoint->str();
  }
  if (l.reversed) j["reversed"] = true;
  return j;
}

ojson weighted_json(const WeightedSpec& w) {
  ojson j;
  if (!w.label.empty()) j["label"] = w.label;
  j["weight"] = scalar_json(w.weight);
  switch (w.kind) {
    case WeightedSpec::Kind::Map:
      j["map"] = map_json(w.map);
      break;
    case WeightedSpec::Kind::Form:
      j["form"] = w.form.str();
      break;
    case WeightedSpec::Kind::Series:
      j["series"] = series_terms_json(w.series);
      j["order"] = w.series.order();
      break;
  }
  return j;
}

ojson instance_json(const Instance& in) {
  ojson j;
  if (!in.name.empty()) j["name"] = in.name;
  j["dim"] = in.dim;
  if (!in.mu.empty()) j["mu"] = scalars_json(in.mu);
  if (!in.lambda.empty()) j["lambda"] = scalars_json(in.lambda);
  if (in.r) j["r"] = scalar_json(*in.r);
  if (in.h) j["h"] = in.h->str();
  for (const auto* list : {&in.F, &in.G}) {
    if (list->empty()) continue;
    ojson a = ojson::array();
    for (const auto& w : *list) a.push_back(weighted_json(w));
    j[list == &in.F ? "F" : "G"] = a;
  }
  if (in.potential) {
    ojson p;
    switch (in.potential->kind) {
      case PotentialSpec::Kind::Form:
        p["form"] = in.potential->form.str();
        break;
      case PotentialSpec::Kind::Series:
        p["series"] = series_terms_json(in.potential->series);
        p["order"] = in.potential->series.order();
        break;
      case PotentialSpec::Kind::Power:
        p["power"] = in.potential->form.str();
        p["exponent"] = str(in.potential->exponent);
        if (in.potential->order) p["order"] = *in.potential->order;
        break;
    }
    j["potential"] = p;
  }
  if (in.P) j["P"] = in.P->str();
  if (in.k) j["k"] = *in.k;
  if (!in.m.empty()) j["m"] = in.m;
  if (!in.n.empty()) j["n"] = in.n;
  if (!in.m_prime.empty()) j["m_prime"] = in.m_prime;
  if (!in.n_prime.empty()) j["n_prime"] = in.n_prime;
  if (in.f) j["f"] = map_json(*in.f);
  if (in.poly) j["poly"] = in.poly->str();
  if (in.center) j["center"] = point_json(*in.center);
  if (in.loop) j["loop"] = loop_json(*in.loop);
  if (in.terms) j["terms"] = *in.terms;
  return j;
}

bool same_loop(const Loop& a, const Loop& b) {
  return a.kind == b.kind && a.center == b.center && a.radius == b.radius && a.loci == b.loci &&
         a.basepoint == b.basepoint && a.reversed == b.reversed;
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

bool operator==(const WeightedSpec& a, const WeightedSpec& b) {
  if (a.label != b.label || !(a.weight == b.weight) || a.kind != b.kind) return false;
  switch (a.kind) {
    case WeightedSpec::Kind::Map:
      return a.map == b.map;
    case WeightedSpec::Kind::Form:
      return a.form == b.form;
    case WeightedSpec::Kind::Series:
      return a.series == b.series && a.series.order() == b.series.order();
  }
  return false;
}

bool operator==(const PotentialSpec& a, const PotentialSpec& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case PotentialSpec::Kind::Form:
      return a.form == b.form;
    case PotentialSpec::Kind::Series:
      return a.series == b.series && a.series.order() == b.series.order();
    case PotentialSpec::Kind::Power:
      return a.form == b.form && a.exponent == b.exponent && a.order == b.order;
  }
  return false;
}

bool operator==(const PointSpec& a, const PointSpec& b) {
  return a.infinity == b.infinity && a.value == b.value && a.locus_index == b.locus_index;
}

bool operator==(const Instance& a, const Instance& b) {
  auto poly_str = [](const Instance& x) { return x.poly ? x.poly->str() : std::string(); };
  bool loops = a.loop.has_value() == b.loop.has_value() && (!a.loop || same_loop(*a.loop, *b.loop));
  return a.name == b.name && a.dim == b.dim && a.mu == b.mu && a.lambda == b.lambda && a.r == b.r &&
         a.h == b.h && a.F == b.F && a.G == b.G && a.potential == b.potential && a.P == b.P && a.k == b.k &&
         a.m == b.m && a.n == b.n && a.m_prime == b.m_prime && a.n_prime == b.n_prime && a.f == b.f &&
         a.poly.has_value() == b.poly.has_value() && poly_str(a) == poly_str(b) && a.center == b.center &&
         loops && a.terms == b.terms;
}

bool operator==(const ProblemFile& a, const ProblemFile& b) {
  bool bases = (a.basis && b.basis) ? *a.basis == *b.basis : a.basis == b.basis;
  return a.version == b.version && bases && a.options == b.options && a.instances == b.instances;
}

ProblemFile parse_problem(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string msg = e.what();
    // nlohmann's message reads "[json.exception.parse_error.101] parse error at line 1, column 5: ..."
    auto pos = msg.find(": ");
    throw SyntaxError(line, col, "well-formed JSON", pos == std::string::npos ? msg : msg.substr(pos + 2));
  }
  check_keys(root, "", {"version", "basis", "options", "instances"});
  ProblemFile out;
  if (!root.contains("version")) schema_error("/version", "missing field");
  out.version = get_int(root["version"], "/version");
  if (out.version != 1) schema_error("/version", "unsupported version " + std::to_string(out.version));

  out.basis = QBasis::rationals();
  if (root.contains("basis")) {
    std::vector<BasisEntry> entries;
    const json& b = get_array(root["basis"], "/basis");
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string p = child("/basis", i);
      check_keys(b[i], p, {"label", "rule"});
      if (!b[i].contains("label") || !b[i].contains("rule")) schema_error(p, "needs label and rule");
      std::string rule = get_string(b[i]["rule"], child(p, "rule"));
      entries.push_back({get_string(b[i]["label"], child(p, "label")),
                         at_path(child(p, "rule"), [&] { return Refiner::parse(rule); })});
    }
    if (entries.empty() || entries[0].refiner.kind != Refiner::Kind::Unit)
      schema_error("/basis", "the first entry must have rule \"unit\"");
    out.basis = std::make_shared<const QBasis>(at_path("/basis", [&] { return QBasis(std::move(entries)); }));
  }

  if (root.contains("options")) {
    const json& o = root["options"];
    check_keys(o, "/options", {"order", "bound", "refine_cap", "terms", "allow_zero", "min_step"});
    if (o.contains("order")) out.options.order = get_int(o["order"], "/options/order", 0);
    if (o.contains("bound")) out.options.bound = get_int(o["bound"], "/options/bound", 0);
    if (o.contains("refine_cap")) out.options.refine_cap = get_int(o["refine_cap"], "/options/refine_cap", 1);
    if (o.contains("terms")) out.options.terms = get_int(o["terms"], "/options/terms", 1);
    if (o.contains("allow_zero")) out.options.allow_zero = get_bool(o["allow_zero"], "/options/allow_zero");
    if (o.contains("min_step")) {
      if (!o["min_step"].is_number() || !(o["min_step"].get<double>() > 0))
        schema_error("/options/min_step", "expected a positive number");
      out.options.min_step = o["min_step"].get<double>();
    }
  }

  if (root.contains("instances")) {
    const json& list = get_array(root["instances"], "/instances");
    for (std::size_t i = 0; i < list.size(); ++i)
      out.instances.push_back(get_instance(list[i], child("/instances", i), out.basis));
  }
  return out;
}

std::string print_problem(const ProblemFile& p) {
  ojson root;
  root["version"] = p.version;
  ojson basis = ojson::array();
  for (const auto& e : (p.basis ? p.basis : QBasis::rationals())->entries())
    basis.push_back({{"label", e.label}, {"rule", e.refiner.rule()}});
  root["basis"] = basis;
  ojson o;
  if (p.options.order) o["order"] = *p.options.order;
  o["bound"] = p.options.bound;
  o["refine_cap"] = p.options.refine_cap;
  o["terms"] = p.options.terms;
  o["allow_zero"] = p.options.allow_zero;
  o["min_step"] = p.options.min_step;
  root["options"] = o;
  ojson list = ojson::array();
  for (const auto& in : p.instances) list.push_back(instance_json(in));
  root["instances"] = list;
  return root.dump(2) + "\n";
}

}  // namespace isokit
