#include "support.hpp"

#include "isokit/error.hpp"
#include "isokit/problem.hpp"

#include <doctest.h>
#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace isokit;

namespace {

const char* const kExample = R"json({
  "version": 1,
  "basis": [{"label": "1", "rule": "unit"}, {"label": "sqrt(2)", "rule": "sqrt(2)"}],
  "options": {"order": 10},
  "instances": [{
    "name": "worked example",
    "mu": [["1/4", "1"], ["1/4", "0"]],
    "lambda": [["0", "1"]],
    "r": "1",
    "h": "1 + z1*xi1",
    "F": [{"weight": ["1/4", "1"], "form": "(1 + z1*xi1)^2"},
          {"weight": ["1/4", "0"], "form": "(1 + z1*xi1)^2"}],
    "G": [{"weight": ["0", "1"], "form": "(1 + z1*xi1)^2"}]
  }]
})json";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ErrorKind parse_kind(const std::string& text) {
  try {
    parse_problem(text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

std::string with_instance(const std::string& inst) {
  return R"({"version": 1, "instances": [)" + inst + "]}";
}

nlohmann::json report_json(const ProblemFile& f, Command c, RunOptions o = {}) {
  return nlohmann::json::parse(run(f, c, o).to_json());
}

}  // namespace

TEST_SUITE("problem") {
  TEST_CASE("worked example parses with its coordinates") {
    ProblemFile p = parse_problem(kExample);
    REQUIRE(p.instances.size() == 1);
    const Instance& in = p.instances[0];
    CHECK(in.mu[0] == testkit::over_sqrt2(Rational(1, 4), 1));
    CHECK(in.mu[1] == testkit::over_sqrt2(Rational(1, 4), 0));
    CHECK(in.lambda[0] == testkit::over_sqrt2(0, 1));
    CHECK(p.basis->size() == 2);
    CHECK(p.options.order == 10);
  }

  TEST_CASE("empty instance list gives an empty report") {
    ProblemFile p = parse_problem(R"({"version": 1, "instances": []})");
    Report r = run(p, Command::Verify);
    CHECK(r.instances.empty());
    CHECK(r.exit_code() == 0);
  }

  TEST_CASE("malformed input") {
    CHECK(parse_kind(with_instance(R"({"mu": ["1/0"]})")) == ErrorKind::SyntaxError);
    CHECK(parse_kind("{\"version\": 1,\n \"instances\": [}") == ErrorKind::SyntaxError);
    try {
      parse_problem("{\"version\": 1,\n  \"instances\": [}");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == 2);
    }
    CHECK(parse_kind(R"({"instances": []})") == ErrorKind::SchemaError);
    CHECK(parse_kind(R"({"version": 2})") == ErrorKind::SchemaError);
    CHECK(parse_kind(with_instance(R"({"mu": [["1", "2"]]})")) == ErrorKind::SchemaError);
    CHECK(parse_kind(with_instance(R"({"colour": 3})")) == ErrorKind::SchemaError);
    CHECK(parse_kind(with_instance(R"({"h": "1 + z*"})")) == ErrorKind::SyntaxError);
    CHECK(parse_kind(with_instance(R"({"h": "1 + z"})")) == ErrorKind::AsymmetricInput);
    CHECK(parse_kind(with_instance(R"({"poly": "(Y - z)^2"})")) == ErrorKind::NotSquareFree);
    CHECK(parse_kind(with_instance(R"({"loop": {"lassos": [0]}})")) == ErrorKind::SchemaError);
  }

  TEST_CASE("schema errors name the offending path") {
    try {
      parse_problem(with_instance(R"({"F": [{"weight": "1", "form": "1", "map": []}]})"));
      FAIL("accepted two payloads");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("/instances/0/F/0") != std::string::npos);
    }
    try {
      parse_problem(with_instance(R"({"h": "1 + z*xi +"})"));
      FAIL("accepted a dangling operator");
    } catch (const SyntaxError& e) {
      CHECK(std::string(e.what()).find("/instances/0/h") != std::string::npos);
    }
  }

  TEST_CASE("print and parse round trip") {
    std::vector<std::string> texts{kExample,
                                   with_instance(R"({"poly": "Y^3 - z", "center": "infinity", "terms": 5,
                                       "loop": {"circle": {"center": "1/2 + i", "radius": "3"}, "reversed": true}})"),
                                   with_instance(R"({"poly": "Y^2 - z", "center": 1,
                                       "loop": {"lassos": [1, 2], "basepoint": "-2*i"}})"),
                                   with_instance(R"({"dim": 2, "potential": {"power": "1 + z1*xi1 + z2*xi2",
                                       "exponent": "1/2"}, "P": "(1 + z1*xi1)^2", "k": 3})"),
                                   with_instance(R"({"F": [{"label": "s", "weight": "2",
                                       "series": [{"z_exp": [1], "xi_exp": [1], "coeff": "1/2"},
                                                  {"z_exp": [0], "xi_exp": [0], "coeff": 1}], "order": 4}]})"),
                                   with_instance(R"({"mu": ["2", "1"], "lambda": ["3"], "m": [1, 2], "n": [1],
                                       "m_prime": [1, 1], "n_prime": [1], "f": ["z^2"]})")};
    for (const char* file : {"example62.json", "example62_construct.json", "algebraic.json", "calabi.json"})
      texts.push_back(slurp(std::string(ISOKIT_DATA_DIR) + "/" + file));
    for (const auto& t : texts) {
      ProblemFile a = parse_problem(t);
      std::string printed = print_problem(a);
      ProblemFile b = parse_problem(printed);
      CHECK(a == b);
      CHECK(print_problem(b) == printed);
    }
  }

  TEST_CASE("random instances round trip") {
    testkit::Rng rng(5150);
    for (int it = 0; it < 40; ++it) {
      nlohmann::json inst;
      inst["name"] = "r" + std::to_string(it);
      nlohmann::json mu = nlohmann::json::array();
      for (int i = 0; i < rng.uniform(1, 3); ++i)
        mu.push_back({isokit::to_string(rng.rational(9, 5)), isokit::to_string(rng.rational(9, 5))});
      inst["mu"] = mu;
      inst["h"] = "1 + " + std::to_string(rng.uniform(1, 5)) + "*z1*xi1 + z1^2*xi1^2";
      inst["m"] = {rng.uniform(0, 4), rng.uniform(0, 4)};
      std::string text = nlohmann::json{{"version", 1},
                                        {"basis", {{{"label", "1"}, {"rule", "unit"}},
                                                   {{"label", "r2"}, {"rule", "sqrt(2)"}}}},
                                        {"instances", {inst}}}
                             .dump();
      ProblemFile a = parse_problem(text);
      CHECK(parse_problem(print_problem(a)) == a);
    }
  }

  TEST_CASE("verify on the worked example") {
    ProblemFile p = parse_problem(kExample);
    Report r = run(p, Command::Verify);
    CHECK(r.exit_code() == 0);
    auto j = nlohmann::json::parse(r.instances[0].json);
    CHECK(j["residual_zero"] == true);
    CHECK(j["order"] == 10);
    for (const auto& f : j["factors"]) {
      CHECK(f["A"] == "1");
      CHECK(f["m"] == 2);
    }
    CHECK(j["factor_equation"]["holds"] == true);
  }

  TEST_CASE("verify reports a broken identity") {
    std::string t = kExample;
    t.replace(t.find("\"r\": \"1\""), 8, "\"r\": \"2\"");
    Report r = run(parse_problem(t), Command::Verify);
    CHECK(r.exit_code() == 1);
    CHECK(r.instances[0].status == InstanceReport::Status::Fail);
  }

  TEST_CASE("verify screens h for positivity by sampling") {
    ProblemFile p = parse_problem(with_instance(R"({"F": [{"weight": "1", "form": "1 - 2*z*xi"}],
                                                   "h": "1 - 2*z*xi", "r": "1"})"));
    auto j = report_json(p, Command::Verify)["instances"][0];
    CHECK(j["status"] == "pass");
    CHECK(j["h_positivity"]["constant_term_positive"] == true);
    CHECK(j["h_positivity"]["sampled_positive"] == false);
    CHECK(j["h_positivity"]["counterexample"]["value"] == "-1");
    CHECK(j["h_positivity"]["counterexample"]["z"][0] == "1");
  }

  TEST_CASE("exit codes") {
    ProblemFile cone = parse_problem(with_instance(R"({"mu": ["1"], "lambda": ["1"]})"));
    CHECK(run(cone, Command::Cone).exit_code() == 1);
    auto j = report_json(cone, Command::Cone);
    CHECK(j["instances"][0]["cone"] == "Violated");
    CHECK(j["instances"][0].contains("witness"));

    ProblemFile bad = parse_problem(with_instance(R"({"mu": ["-1"], "lambda": ["1"]})"));
    Report r = run(bad, Command::Cone);
    CHECK(r.exit_code() == 2);
    CHECK(r.instances[0].error == ErrorKind::NonPositiveEntry);

    ProblemFile missing = parse_problem(with_instance(R"({"mu": ["1"]})"));
    CHECK(run(missing, Command::Veronese).exit_code() == 2);

    ProblemFile ok = parse_problem(with_instance(R"({"dim": 2, "k": 2})"));
    CHECK(run(ok, Command::Veronese).exit_code() == 0);
    CHECK(report_json(ok, Command::Veronese)["instances"][0]["components"] == 5);
  }

  TEST_CASE("reports are deterministic and independent of concurrency") {
    ProblemFile p = parse_problem(slurp(std::string(ISOKIT_DATA_DIR) + "/algebraic.json"));
    std::string a = run(p, Command::Puiseux).to_json();
    RunOptions four;
    four.jobs = 4;
    CHECK(run(p, Command::Puiseux, four).to_json() == a);
    CHECK(run(p, Command::Puiseux).to_json() == a);
    std::string m = run(p, Command::Monodromy).to_json();
    CHECK(run(p, Command::Monodromy, four).to_json() == m);
  }

  TEST_CASE("resolvable on power potentials") {
    ProblemFile p = parse_problem(slurp(std::string(ISOKIT_DATA_DIR) + "/calabi.json"));
    auto j = report_json(p, Command::Resolvable);
    for (const auto& inst : j["instances"]) {
      std::string name = inst["name"];
      if (name.find("1/2") != std::string::npos) CHECK(inst["failure"]["value"] == "-1/8");
      if (name.find("5/2") != std::string::npos) CHECK(inst["failure"]["value"] == "-5/128");
      if (name.find("cube") != std::string::npos) CHECK(inst["resolvable"] == true);
    }
  }

  TEST_CASE("command names") {
    for (auto c : {Command::Verify, Command::Cone, Command::Factors, Command::Veronese, Command::Resolvable,
                   Command::Factor, Command::Puiseux, Command::Monodromy, Command::Classify, Command::Example62})
      CHECK(parse_command(to_string(c)) == c);
    CHECK_FALSE(parse_command("verfy"));
  }
}
