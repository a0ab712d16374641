#pragma once

// Problem files (JSON, schema version 1) and the command runner behind the
// isokit CLI.
//
// {
//   "version": 1,
//   "basis": [{"label": "1", "rule": "unit"}, {"label": "sqrt2", "rule": "sqrt(2)"}],
//   "options": {"order": 10, "bound": 5, "refine_cap": 64, "terms": 6},
//   "instances": [{"name": "...", "dim": 1, "mu": [["1/4", "1"]], ...}]
// }
//
// Scalars are coordinate lists over the basis (a bare "p/q" is a rational).

#include "isokit/error.hpp"
#include "isokit/hermitian.hpp"
#include "isokit/puiseux.hpp"
#include "isokit/scalar.hpp"
#include "isokit/series.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace isokit {

struct ProblemOptions {
  std::optional<int> order;
  int bound = 5;
  int refine_cap = 64;
  int terms = 6;
  bool allow_zero = false;
  double min_step = 1e-9;

  friend bool operator==(const ProblemOptions&, const ProblemOptions&) = default;
};

/// A weighted factor of an identity: a map, a form, or a truncated series.
struct WeightedSpec {
  enum class Kind { Map, Form, Series };
  std::string label;
  QModReal weight;
  Kind kind = Kind::Form;
  MapTuple map;
  HermitianForm form;
  PolarizedSeries series;

  friend bool operator==(const WeightedSpec&, const WeightedSpec&);
};

/// Input to resolvable: a form, a series, or base^exponent expanded as a series.
struct PotentialSpec {
  enum class Kind { Form, Series, Power };
  Kind kind = Kind::Form;
  HermitianForm form;
  PolarizedSeries series;
  Rational exponent;
  /// Expansion order for a power; the file or command-line order otherwise.
  std::optional<int> order;

  friend bool operator==(const PotentialSpec&, const PotentialSpec&);
};

/// A point given exactly, at infinity, or as a 1-based index into the locus.
struct PointSpec {
  bool infinity = false;
  std::optional<Ext> value;
  std::optional<int> locus_index;

  friend bool operator==(const PointSpec&, const PointSpec&);
};

struct Instance {
  std::string name;
  int dim = 1;
  std::vector<QModReal> mu, lambda;
  std::optional<QModReal> r;
  std::optional<HermitianForm> h;
  std::vector<WeightedSpec> F, G;
  std::optional<PotentialSpec> potential;
  std::optional<HermitianForm> P;
  std::optional<int> k;
  std::vector<int> m, n, m_prime, n_prime;
  std::optional<MapTuple> f;
  std::optional<AlgebraicFunction> poly;
  std::optional<PointSpec> center;
  std::optional<Loop> loop;
  std::optional<int> terms;

  friend bool operator==(const Instance&, const Instance&);
};

struct ProblemFile {
  int version = 1;
  BasisPtr basis;
  ProblemOptions options;
  std::vector<Instance> instances;

  friend bool operator==(const ProblemFile&, const ProblemFile&);
};

/// Throws SyntaxError (malformed JSON or expression) or SchemaError(path).
ProblemFile parse_problem(std::string_view text);
/// Canonical JSON; parse_problem(print_problem(p)) == p.
std::string print_problem(const ProblemFile& p);

enum class Command { Verify, Cone, Factors, Veronese, Resolvable, Factor, Puiseux, Monodromy, Classify, Example62 };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command c);

struct RunOptions {
  /// Overrides the file's truncation order.
  std::optional<int> order;
  std::optional<int> bound;
  std::optional<int> refine_cap;
  /// Instances processed concurrently; output order is unaffected.
  int jobs = 1;
};

struct InstanceReport {
  enum class Status { Pass, Fail, Error };
  Status status = Status::Pass;
  /// Set when status is Error.
  std::optional<ErrorKind> error;
  /// JSON object text with deterministic key order.
  std::string json;
  std::vector<std::string> lines;
};

struct Report {
  Command command = Command::Verify;
  std::vector<InstanceReport> instances;
  /// 0 all pass, 1 some check failed, 2 input error.
  int exit_code() const;
  std::string to_json() const;
  std::string to_text() const;
};

Report run(const ProblemFile& file, Command command, const RunOptions& opts = {});

/// True for error kinds that indicate bad input rather than a failed check.
bool is_input_error(ErrorKind kind);

/// An error's message without its "Kind: " prefix.
std::string bare_message_of(const Error& e);

}  // namespace isokit
