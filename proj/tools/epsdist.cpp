// Command-line front end: check, distance, distinguish, eval, validate, oracle.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "epsdist/errors.hpp"
#include "epsdist/extract.hpp"
#include "epsdist/formula.hpp"
#include "epsdist/game.hpp"
#include "epsdist/modalities.hpp"
#include "epsdist/oracle.hpp"
#include "epsdist/systems.hpp"
#include "json.hpp"

namespace {

using namespace epsdist;
using nlohmann::json;

constexpr int kExitInput = 64;
constexpr int kExitContract = 65;
constexpr int kExitCap = 66;

/// Bad command-line input that is not a parse error of a file.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct PairOptions {
  std::string left;
  std::string right;
  std::string lx;
  std::string ry;
  std::string modalities;
  bool bisim = false;
};

void add_pair_options(CLI::App* cmd, PairOptions& o, bool states) {
  cmd->add_option("--left", o.left, "System file for the left state space")->required();
  cmd->add_option("--right", o.right, "System file for the right state space")->required();
  if (states) {
    cmd->add_option("--lx", o.lx, "State of the left system")->required();
    cmd->add_option("--ry", o.ry, "State of the right system")->required();
  }
  cmd->add_option("--modalities", o.modalities,
                  "Comma-separated modalities, e.g. \"P,~P\" (default depends on the system type)");
  cmd->add_flag("--bisim", o.bisim, "Close the modality set under duals");
}

Value parse_value_arg(const std::string& flag, const std::string& text) {
  try {
    return Value::parse(text);
  } catch (const ParseError& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json_file(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON in '" + path + "': " + e.what(), e.byte);
  }
}

struct Loaded {
  System left;
  System right;
  ModalitySet lambda;
  std::size_t x = 0;
  std::size_t y = 0;
};

std::size_t lookup(const System& sys, const std::string& name, const char* flag) {
  if (const auto i = sys.find(name)) return *i;
  throw UsageError(std::string(flag) + ": unknown state '" + name + "'");
}

Loaded load_pair(const PairOptions& o, bool states) {
  Loaded l{load_system_file(o.left), load_system_file(o.right), {}, 0, 0};
  l.lambda = o.modalities.empty() ? default_modalities(l.left, l.right)
                                  : parse_modality_set(o.modalities);
  if (o.bisim) l.lambda = close_under_duals(l.lambda);
  if (states) {
    l.x = lookup(l.left, o.lx, "--lx");
    l.y = lookup(l.right, o.ry, "--ry");
  }
  return l;
}

json modality_names(const ModalitySet& ms) {
  json a = json::array();
  for (const auto& m : ms) a.push_back(to_string(m));
  return a;
}

void emit(const json& j, bool human, const std::string& prose) {
  if (human) {
    std::cout << prose << "\n";
  } else {
    std::cout << j.dump(2) << "\n";
  }
}

int run_check(const PairOptions& o, const std::string& eps_text, bool human) {
  const auto l = load_pair(o, true);
  const auto eps = parse_value_arg("--eps", eps_text);
  const bool similar = check_similar(GameConfig{l.left, l.right, l.lambda, eps}, l.x, l.y);
  const std::string verdict = similar ? "similar" : "not-similar";
  json j{{"command", "check"},
         {"left", o.lx},
         {"right", o.ry},
         {"eps", eps.str()},
         {"modalities", modality_names(l.lambda)},
         {"result", verdict}};
  emit(j, human, verdict);
  return similar ? 0 : 1;
}

int run_distance(const PairOptions& o, const std::string& mode, std::size_t cap, bool human) {
  const auto l = load_pair(o, true);
  json j{{"command", "distance"},
         {"left", o.lx},
         {"right", o.ry},
         {"modalities", modality_names(l.lambda)}};
  if (mode == "exact") {
    const auto d = distance_exact(l.left, l.right, l.x, l.y, l.lambda, cap);
    j["mode"] = "exact";
    j["distance"] = d.str();
    emit(j, human, d.str());
    return 0;
  }
  Value tol = default_tolerance();
  if (mode.rfind("bisect", 0) == 0) {
    if (mode.size() > 6) {
      if (mode[6] != ':') throw UsageError("--mode: expected bisect:TOL or exact");
      tol = parse_value_arg("--mode", mode.substr(7));
    }
  } else {
    throw UsageError("--mode: expected bisect:TOL or exact");
  }
  if (tol.is_zero()) throw UsageError("--mode: tolerance must be positive");
  const auto iv = distance_bisect(l.left, l.right, l.x, l.y, l.lambda, tol);
  j["mode"] = "bisect";
  j["tolerance"] = tol.str();
  j["lo"] = iv.lo.str();
  j["hi"] = iv.hi.str();
  emit(j, human, "[" + iv.lo.str() + ", " + iv.hi.str() + "]");
  return 0;
}

int run_distinguish(const PairOptions& o, const std::string& eps_text, const std::string& logic_text,
                    const std::string& out, bool human) {
  const auto l = load_pair(o, true);
  const auto eps = parse_value_arg("--eps", eps_text);
  const auto logic = logic_from_string(logic_text);
  if (!logic) throw UsageError("--logic: expected two-valued or quantitative");
  const GameConfig cfg{l.left, l.right, l.lambda, eps};
  const auto sol = solve_game(cfg);
  json j{{"command", "distinguish"},
         {"left", o.lx},
         {"right", o.ry},
         {"eps", eps.str()},
         {"logic", logic_text},
         {"modalities", modality_names(l.lambda)}};
  if (!sol.won(l.x, l.y)) {
    j["result"] = "not-distinguishable";
    emit(j, human, "not distinguishable at eps = " + eps.str());
    return 2;
  }
  const auto ex = *logic == Logic::TwoValued ? extract_two_valued(sol, cfg)
                                              : extract_quantitative(sol, cfg);
  const auto cert = make_certificate(ex, cfg, l.x, l.y);
  const auto cj = certificate_to_json(cert, l.left, l.right);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + out + "'");
    f << cj.dump(2) << "\n";
  }
  j["result"] = "distinguished";
  j["certificate"] = cj;
  if (!out.empty()) j["out"] = out;
  emit(j, human, cj.contains("text") ? cj["text"].get<std::string>() : std::string("(formula too large to print)"));
  return 0;
}

int run_eval(const std::string& formula_file, const std::string& system_file,
             const std::optional<std::string>& eps_text, bool human) {
  const auto sys = load_system_file(system_file);
  const auto text = read_file(formula_file);
  const bool is_dag = text.find_first_not_of(" \t\r\n") != std::string::npos &&
                      text[text.find_first_not_of(" \t\r\n")] == '{';
  json j{{"command", "eval"}};
  if (eps_text) {
    const auto eps = parse_value_arg("--eps", *eps_text);
    Dag2 dag;
    const auto root = is_dag ? dag_from_json(dag, read_json_file(formula_file)) : parse_formula2(dag, text);
    check_compatible(modalities_of(dag, root), sys);
    const auto sat = eval2(dag, root, sys, eps);
    json names = json::array();
    std::string prose;
    for (auto x : sat.members()) {
      names.push_back(sys.name(x));
      prose += (prose.empty() ? "" : " ") + sys.name(x);
    }
    j["logic"] = "two-valued";
    j["eps"] = eps.str();
    j["satisfied"] = names;
    emit(j, human, "{" + prose + "}");
  } else {
    DagQ dag;
    const auto root = is_dag ? dag_from_json(dag, read_json_file(formula_file)) : parse_formulaQ(dag, text);
    check_compatible(modalities_of(dag, root), sys);
    const auto values = evalQ(dag, root, sys);
    json m = json::object();
    std::string prose;
    for (std::size_t x = 0; x < sys.size(); ++x) {
      m[sys.name(x)] = values[x].str();
      prose += sys.name(x) + " = " + values[x].str() + "\n";
    }
    j["logic"] = "quantitative";
    j["values"] = m;
    if (!prose.empty()) prose.pop_back();
    emit(j, human, prose);
  }
  return 0;
}

int run_validate(const std::string& cert_file, const std::string& left_file,
                 const std::string& right_file, bool human) {
  const auto left = load_system_file(left_file);
  const auto right = load_system_file(right_file);
  const auto doc = read_json_file(cert_file);
  bool valid = false;
  std::string reason;
  try {
    valid = recheck(certificate_from_json(doc, left, right), left, right);
    if (!valid) reason = "recheck failed";
  } catch (const ValidationError& e) {
    reason = e.what();
  }
  json j{{"command", "validate"}, {"valid", valid}};
  if (!valid) j["reason"] = reason;
  emit(j, human, valid ? "valid" : "invalid: " + reason);
  return valid ? 0 : 1;
}

int run_oracle(const PairOptions& o, const std::optional<std::string>& eps_text, std::size_t cap,
               bool human) {
  const auto l = load_pair(o, false);
  json j{{"command", "oracle"},
         {"note", "exponential-time reference computation"},
         {"modalities", modality_names(l.lambda)},
         {"cap", cap}};
  const auto d = oracle::exact_distance(l.left, l.right, l.lambda, cap);
  json dist = json::object();
  std::string prose;
  for (std::size_t x = 0; x < l.left.size(); ++x) {
    json row = json::object();
    for (std::size_t y = 0; y < l.right.size(); ++y) {
      row[l.right.name(y)] = d.at(x, y).str();
      prose += "d(" + l.left.name(x) + ", " + l.right.name(y) + ") = " + d.at(x, y).str() + "\n";
    }
    dist[l.left.name(x)] = row;
  }
  j["distance"] = dist;
  if (eps_text) {
    const auto eps = parse_value_arg("--eps", *eps_text);
    const auto sim = oracle::greatest_simulation(l.left, l.right, l.lambda, eps, cap);
    json pairs = json::array();
    for (std::size_t x = 0; x < l.left.size(); ++x)
      for (auto y : sim.row(x).members()) {
        pairs.push_back(json::array({l.left.name(x), l.right.name(y)}));
        prose += l.left.name(x) + " <=_" + eps.str() + " " + l.right.name(y) + "\n";
      }
    j["eps"] = eps.str();
    j["simulation"] = pairs;
  }
  if (!prose.empty()) prose.pop_back();
  emit(j, human, prose);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold-based behavioural distances and distinguishing formulae"};
  app.require_subcommand(1);
  bool human = false;
  app.add_flag("--human", human, "Print prose instead of JSON");

  PairOptions check_o;
  std::string check_eps;
  auto* check = app.add_subcommand("check", "Decide whether d(x,y) <= eps");
  add_pair_options(check, check_o, true);
  check->add_option("--eps", check_eps, "Threshold")->required();

  PairOptions dist_o;
  std::string mode = "bisect";
  std::size_t dist_cap = kDefaultBruteForceCap;
  auto* distance = app.add_subcommand("distance", "Compute d(x,y)");
  add_pair_options(distance, dist_o, true);
  distance->add_option("--mode", mode, "bisect:TOL or exact")->capture_default_str();
  distance->add_option("--cap", dist_cap, "State cap for exact mode")->capture_default_str();

  PairOptions dis_o;
  std::string dis_eps;
  std::string logic = "two-valued";
  std::string out;
  auto* distinguish = app.add_subcommand("distinguish", "Extract an eps-distinguishing formula");
  add_pair_options(distinguish, dis_o, true);
  distinguish->add_option("--eps", dis_eps, "Threshold")->required();
  distinguish->add_option("--logic", logic, "two-valued or quantitative")->capture_default_str();
  distinguish->add_option("--out", out, "Certificate file to write");

  std::string formula_file;
  std::string system_file;
  std::optional<std::string> eval_eps;
  auto* eval = app.add_subcommand("eval", "Evaluate a formula (two-valued with --eps, else quantitative)");
  eval->add_option("--formula-file", formula_file, "Formula text or dag JSON")->required();
  eval->add_option("--system", system_file, "System file")->required();
  eval->add_option("--eps", eval_eps, "Satisfaction threshold for the two-valued logic");

  std::string cert_file;
  std::string v_left;
  std::string v_right;
  auto* validate = app.add_subcommand("validate", "Independently recheck a certificate");
  validate->add_option("--cert", cert_file, "Certificate file")->required();
  validate->add_option("--left", v_left, "Left system file")->required();
  validate->add_option("--right", v_right, "Right system file")->required();

  PairOptions or_o;
  std::optional<std::string> or_eps;
  std::size_t or_cap = kDefaultBruteForceCap;
  auto* orc = app.add_subcommand("oracle", "Exponential-time reference distances and simulations");
  add_pair_options(orc, or_o, false);
  orc->add_option("--eps", or_eps, "Also print the greatest eps-simulation");
  orc->add_option("--cap", or_cap, "Maximum total number of states")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*check) return run_check(check_o, check_eps, human);
    if (*distance) return run_distance(dist_o, mode, dist_cap, human);
    if (*distinguish) return run_distinguish(dis_o, dis_eps, logic, out, human);
    if (*eval) return run_eval(formula_file, system_file, eval_eps, human);
    if (*validate) return run_validate(cert_file, v_left, v_right, human);
    if (*orc) return run_oracle(or_o, or_eps, or_cap, human);
  } catch (const CapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const ContractError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitContract;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
