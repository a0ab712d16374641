// isokit <command> [--input FILE | key=value ...] [--order D] [--bound B] [--json] [--jobs N]
//
// Inline key=value arguments describe a single instance:
//   isokit cone basis=1,sqrt(2) mu="1/4,1;1/4,0" lambda="0,1"
//   isokit veronese n=2 k=2
//   isokit puiseux poly="Y^2 - z" center=0
//   isokit classify poly="Y^2 - z*(z-1)" locus=2

#include "isokit/error.hpp"
#include "isokit/problem.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using isokit::Error;
using isokit::ErrorKind;
using json = nlohmann::json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

bool is_integer(const std::string& s) {
  return !s.empty() && s.find_first_not_of("0123456789", s[0] == '-' ? 1 : 0) == std::string::npos &&
         s != "-";
}

json int_value(const std::string& key, const std::string& v) {
  if (!is_integer(v)) throw Error(ErrorKind::InvalidArgument, key + " must be an integer, got \"" + v + "\"");
  return std::stoll(v);
}

json int_list(const std::string& key, const std::string& v) {
  json a = json::array();
  for (const auto& p : split(v, ',')) a.push_back(int_value(key, p));
  return a;
}

// "1/4,1;1/4,0" -> [["1/4","1"],["1/4","0"]]; a lone "1" stays a bare rational.
json scalar_list(const std::string& v) {
  json a = json::array();
  for (const auto& item : split(v, ';')) {
    auto coords = split(item, ',');
    if (coords.size() == 1)
      a.push_back(coords[0]);
    else
      a.push_back(coords);
  }
  return a;
}

json basis_value(const std::string& v) {
  json a = json::array();
  for (const auto& entry : split(v, ',')) {
    if (entry == "1")
      a.push_back({{"label", "1"}, {"rule", "unit"}});
    else
      a.push_back({{"label", entry}, {"rule", entry}});
  }
  return a;
}

// Builds a one-instance problem file from key=value arguments.
std::string inline_problem(const std::vector<std::string>& args, isokit::Command command) {
  json root = {{"version", 1}};
  json inst = json::object();
  json potential, loop;
  for (const auto& arg : args) {
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error(ErrorKind::InvalidArgument, "expected key=value, got \"" + arg + "\"");
    std::string key = arg.substr(0, eq), v = arg.substr(eq + 1);
    if (key == "basis") {
      root["basis"] = basis_value(v);
    } else if (key == "dim" || (key == "n" && command == isokit::Command::Veronese)) {
      inst["dim"] = int_value(key, v);
    } else if (key == "k" || key == "terms") {
      inst[key] = int_value(key, v);
    } else if (key == "mu" || key == "lambda") {
      inst[key] = scalar_list(v);
    } else if (key == "r") {
      auto coords = split(v, ',');
      inst["r"] = coords.size() == 1 ? json(coords[0]) : json(coords);
    } else if (key == "m" || key == "n" || key == "m_prime" || key == "n_prime") {
      inst[key] = int_list(key, v);
    } else if (key == "name" || key == "h" || key == "P" || key == "poly") {
      inst[key] = v;
    } else if (key == "f") {
      inst["f"] = split(v, ';');
    } else if (key == "center") {
      inst["center"] = v;
    } else if (key == "locus") {
      inst["center"] = int_value(key, v);
    } else if (key == "potential") {
      potential["form"] = v;
    } else if (key == "power") {
      potential["power"] = v;
    } else if (key == "exponent") {
      potential["exponent"] = v;
    } else if (key == "lassos") {
      loop["lassos"] = int_list(key, v);
    } else if (key == "basepoint") {
      loop["basepoint"] = v;
    } else if (key == "circle") {
      auto parts = split(v, ',');
      if (parts.size() != 2) throw Error(ErrorKind::InvalidArgument, "circle=CENTER,RADIUS");
      loop["circle"] = {{"center", parts[0]}, {"radius", parts[1]}};
    } else if (key == "reversed") {
      loop["reversed"] = v == "true" || v == "1";
    } else if (key == "bound" || key == "order") {
      root["options"][key] = int_value(key, v);
    } else {
      throw Error(ErrorKind::InvalidArgument, "unknown key \"" + key + "\"");
    }
  }
  if (!potential.is_null()) inst["potential"] = potential;
  if (!loop.is_null()) inst["loop"] = loop;
  root["instances"] = json::array({inst});
  return root.dump();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for isometry identities, Hermitian potentials and algebraic functions"};
  std::string command_name, input;
  std::vector<std::string> args;
  std::optional<int> order, bound;
  int jobs = 1;
  bool as_json = false, print = false;
  app.add_option("command", command_name,
                 "verify|cone|factors|veronese|resolvable|factor|puiseux|monodromy|classify|example62")
      ->required();
  app.add_option("args", args, "key=value instance fields (instead of --input)");
  app.add_option("--input,-i", input, "problem file (JSON)");
  app.add_option("--order", order, "truncation order D")->check(CLI::NonNegativeNumber);
  app.add_option("--bound", bound, "search bound for the factor equation")->check(CLI::NonNegativeNumber);
  app.add_option("--jobs,-j", jobs, "instances processed concurrently")->check(CLI::PositiveNumber);
  app.add_flag("--json", as_json, "structured report");
  app.add_flag("--print", print, "print the canonical problem file and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    auto command = isokit::parse_command(command_name);
    if (!command) throw Error(ErrorKind::InvalidArgument, "unknown command \"" + command_name + "\"");
    if (!input.empty() && !args.empty())
      throw Error(ErrorKind::InvalidArgument, "give either --input or key=value arguments, not both");
    if (input.empty() && args.empty())
      throw Error(ErrorKind::InvalidArgument, "no instance given (use --input FILE or key=value arguments)");
    std::string text = input.empty() ? inline_problem(args, *command) : read_file(input);
    isokit::ProblemFile file = isokit::parse_problem(text);
    if (print) {
      std::cout << isokit::print_problem(file);
      return 0;
    }

    isokit::RunOptions opts;
    opts.order = order;
    opts.bound = bound;
    opts.jobs = jobs;
    if (const char* cap = std::getenv("ISOKIT_REFINE_CAP")) {
      std::string s(cap);
      if (!is_integer(s) || std::stoll(s) < 1 || std::stoll(s) > 1 << 20)
        throw Error(ErrorKind::InvalidArgument, "ISOKIT_REFINE_CAP must be a positive integer");
      opts.refine_cap = std::stoi(s);
    }
    isokit::Report report = isokit::run(file, *command, opts);
    std::cout << (as_json ? report.to_json() : report.to_text());
    return report.exit_code();
  } catch (const Error& e) {
    std::cerr << "isokit: " << e.what() << "\n";
    return isokit::is_input_error(e.kind()) ? 2 : 1;
  }
}
