#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "opacsyn/abts.hpp"
#include "opacsyn/estimation.hpp"
#include "opacsyn/fixture.hpp"
#include "opacsyn/info_state.hpp"
#include "opacsyn/oracle.hpp"
#include "opacsyn/supervisor.hpp"

namespace {

using namespace opacsyn;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;  // not opaque / unsolvable / violations
constexpr int kExitInput = 2;
constexpr int kExitCapacity = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SemanticError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output, std::ios::binary);
  if (!out) throw SemanticError("cannot write " + output);
  out << text;
}

Automaton load_plant(const std::string& path) {
  return parse_automaton(slurp(path));
}

std::string set_text(const Automaton& a, const StateSet& s) {
  std::string out = "{";
  bool first = true;
  s.for_each([&](int x) {
    if (!first) out += ",";
    first = false;
    out += a.state_name(x);
  });
  return out + "}";
}

std::string decision_text(const Automaton& a, EventSet d) {
  std::string out = "{";
  auto names = a.event_names_of(d & a.controllable());
  for (std::size_t i = 0; i < names.size(); ++i)
    out += (i ? "," : "") + names[i];
  return out + "}";
}

nlohmann::ordered_json word_names(const Automaton& a, const Word& w) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (int e : w) out.push_back(a.event_name(e));
  return out;
}

int cmd_verify(const std::string& input, const std::string& format,
               const std::string& output) {
  Automaton a = load_plant(input);
  OpacityVerdict v = verify_infinite_step_opacity(a);
  if (format == "json") {
    nlohmann::ordered_json j;
    j["opaque"] = v.opaque;
    if (v.witness) {
      j["witness"] = {
          {"alpha_prime", word_names(a, v.witness->alpha_prime)},
          {"alpha_beta", word_names(a, v.witness->alpha_beta)},
          {"estimate_at_reveal", a.set_names(v.witness->estimate_at_reveal)},
          {"estimate_at_instant", a.set_names(v.witness->estimate_at_instant)}};
    }
    emit(j.dump(2) + "\n", output);
  } else {
    std::ostringstream os;
    if (v.opaque) {
      os << "opaque: the plant is infinite-step opaque\n";
    } else {
      os << "not opaque: visit at observation '"
         << a.format_word(v.witness->alpha_prime)
         << "' stands revealed after '"
         << a.format_word(v.witness->alpha_beta) << "'\n"
         << "  estimate there   " << set_text(a, v.witness->estimate_at_reveal)
         << "\n  estimate at instant "
         << set_text(a, v.witness->estimate_at_instant) << "\n";
    }
    emit(os.str(), output);
  }
  return v.opaque ? kExitOk : kExitNegative;
}

int cmd_synth_qual(const std::string& input, const std::string& chooser,
                   bool simplify, std::size_t max_states,
                   const std::string& format, const std::string& output) {
  Automaton a = load_plant(input);
  GameGraph solved = solve_safety_game(a, simplify, max_states);
  if (solved.empty()) {
    emit("unsolvable: no supervisor can enforce infinite-step opacity\n",
         output.empty() ? "" : output);
    return kExitNegative;
  }
  if (chooser == "all") {
    std::vector<Supervisor> all = extract_all_supervisors(solved, a);
    nlohmann::ordered_json j;
    j["supervisors"] = nlohmann::ordered_json::array();
    for (auto& s : all)
      j["supervisors"].push_back(
          nlohmann::ordered_json::parse(supervisor_to_json(s, a)));
    emit(j.dump(2) + "\n", output);
    return kExitOk;
  }
  Supervisor s = *extract_supervisor(solved, a, lex_chooser());
  if (format == "dot")
    emit(supervisor_to_dot(s, a), output);
  else if (format == "text") {
    std::ostringstream os;
    os << "supervisor with " << s.nodes.size()
       << " memory states; initial decision "
       << decision_text(a, s.nodes[s.initial].decision) << "\n";
    emit(os.str(), output);
  } else {
    emit(supervisor_to_json(s, a), output);
  }
  return kExitOk;
}

int cmd_synth_quant(const std::string& input, int n_max,
                    const std::string& chooser, bool simplify,
                    std::size_t max_states, const std::string& format,
                    const std::string& output) {
  Automaton a = load_plant(input);
  CostFunction cf = CostFunction::linear(n_max);
  AugGameGraph g = build_total_abts(a, cf, simplify, max_states);
  ValueTable v = value_iteration(g, cf);
  if (v.initial_value == kInfiniteValue) {
    emit("unsolvable: no supervisor achieves a finite worst-case cost\n",
         output.empty() ? "" : output);
    return kExitNegative;
  }
  if (chooser == "all") {
    nlohmann::ordered_json j;
    j["optimal_cost"] = v.initial_value;
    j["supervisors"] = nlohmann::ordered_json::array();
    for (auto& s : extract_all_optimal_supervisors(g, a, v))
      j["supervisors"].push_back(
          nlohmann::ordered_json::parse(supervisor_to_json(s, a)));
    emit(j.dump(2) + "\n", output);
    return kExitOk;
  }
  auto s = extract_optimal_supervisor(g, a, v);
  if (format == "csv") {
    emit(value_table_csv(g, v), output);
  } else if (format == "dot") {
    emit(supervisor_to_dot(*s, a), output);
  } else if (format == "text") {
    std::ostringstream os;
    os << "optimal worst-case cost " << v.initial_value << ", stabilized by round "
       << v.stabilized_round << "\ninitial decision "
       << decision_text(a, s->nodes[s->initial].decision) << "\n";
    emit(os.str(), output);
  } else {
    nlohmann::ordered_json j;
    j["optimal_cost"] = v.initial_value;
    j["stabilized_round"] = v.stabilized_round;
    j["supervisor"] =
        nlohmann::ordered_json::parse(supervisor_to_json(*s, a));
    emit(j.dump(2) + "\n", output);
  }
  return kExitOk;
}

int cmd_simulate(const std::string& input, const std::string& supervisor_path) {
  Automaton a = load_plant(input);
  Supervisor s = supervisor_from_json(slurp(supervisor_path), a);
  int mem = s.initial;
  StateSet estimate = unobservable_reach(a, StateSet::single(a.initial()),
                                         s.nodes[mem].decision);
  auto report = [&]() {
    std::cout << "decision " << decision_text(a, s.nodes[mem].decision)
              << " | estimate " << set_text(a, estimate);
    if (s.nodes[mem].budget != Supervisor::kNoBudget)
      std::cout << " | budget " << s.nodes[mem].budget;
    std::cout << "\n";
  };
  report();
  std::string line;
  while (std::getline(std::cin, line)) {
    std::istringstream is(line);
    std::string name;
    if (!(is >> name)) continue;
    int e;
    try {
      e = a.event_id(name);
    } catch (const SemanticError&) {
      std::cout << "rejected: unknown event '" << name << "'\n";
      continue;
    }
    if (!a.is_observable(e)) {
      std::cout << "rejected: event '" << name << "' is unobservable\n";
      continue;
    }
    if (!(s.nodes[mem].decision & event_bit(e))) {
      std::cout << "rejected: event '" << name << "' is disabled\n";
      continue;
    }
    StateSet step = observable_reach(a, estimate, e);
    auto next = s.nodes[mem].next.find(e);
    if (step.empty() || next == s.nodes[mem].next.end()) {
      std::cout << "rejected: event '" << name << "' is not feasible here\n";
      continue;
    }
    mem = next->second;
    estimate = unobservable_reach(a, step, s.nodes[mem].decision);
    report();
  }
  return kExitOk;
}

int cmd_export_dot(const std::string& input, const std::string& supervisor_path,
                   const std::string& output) {
  Automaton a = load_plant(input);
  if (supervisor_path.empty()) {
    emit(automaton_to_dot(a), output);
  } else {
    Supervisor s = supervisor_from_json(slurp(supervisor_path), a);
    emit(supervisor_to_dot(s, a), output);
  }
  return kExitOk;
}

int cmd_fixture_check(const std::vector<std::string>& files) {
  bool all_ok = true;
  for (auto& f : files) {
    FixtureReport r = check_fixture(f);
    std::cout << (r.ok() ? "pass" : "FAIL") << " " << r.name << " ("
              << r.checks << " checks)\n";
    for (auto& v : r.violations) std::cout << "  " << v << "\n";
    all_ok = all_ok && r.ok();
  }
  return all_ok ? kExitOk : kExitNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opacity verification and supervisor synthesis for "
               "partially-observed discrete-event systems"};
  app.require_subcommand(1);

  std::string input, output, supervisor_path, format;
  std::string chooser = "lex", simplify = "on";
  int n_max = 1;
  std::size_t max_states = 1'000'000;
  std::vector<std::string> fixture_files;

  auto add_common = [&](CLI::App* cmd, bool with_format = true) {
    cmd->add_option("input", input, "plant file (.des text or JSON mirror)")
        ->required();
    cmd->add_option("--output", output, "write the artifact here");
    if (with_format)
      cmd->add_option("--format", format,
                      "output format: json|dot|csv|text");
  };

  auto* verify = app.add_subcommand("verify", "check infinite-step opacity");
  add_common(verify);

  auto* squal = app.add_subcommand(
      "synth-qual", "synthesize a maximally-permissive opacity-enforcing "
                    "supervisor");
  add_common(squal);
  squal->add_option("--chooser", chooser, "decision chooser: lex|all");
  squal->add_option("--simplify", simplify, "information-state simplification: on|off");
  squal->add_option("--max-states", max_states, "game-state cap");

  auto* squant = app.add_subcommand(
      "synth-quant", "synthesize an optimal supervisor for worst-case "
                     "revelation cost");
  add_common(squant);
  squant->add_option("--n-max", n_max, "cost horizon (cost of an immediate "
                                       "revelation)")
      ->required()
      ->check(CLI::PositiveNumber);
  squant->add_option("--chooser", chooser, "decision chooser: lex|all");
  squant->add_option("--simplify", simplify, "on|off");
  squant->add_option("--max-states", max_states, "game-state cap");

  auto* sim = app.add_subcommand(
      "simulate", "drive a synthesized supervisor with observations from "
                  "standard input");
  add_common(sim, false);
  sim->add_option("--supervisor", supervisor_path, "supervisor JSON artifact")
      ->required();

  auto* dot = app.add_subcommand("export-dot", "GraphViz export");
  add_common(dot, false);
  dot->add_option("--supervisor", supervisor_path,
                  "export this supervisor artifact instead of the plant");

  auto* fix = app.add_subcommand("fixture-check",
                                 "replay recorded computations against a "
                                 "fixture plant");
  fix->add_option("constraints", fixture_files, "constraint JSON files")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    // Human-facing default for verification, artifact JSON for synthesis.
    if (format.empty()) format = verify->parsed() ? "text" : "json";
    if (verify->parsed()) return cmd_verify(input, format, output);
    if (squal->parsed())
      return cmd_synth_qual(input, chooser, simplify != "off", max_states,
                            format, output);
    if (squant->parsed())
      return cmd_synth_quant(input, n_max, chooser, simplify != "off",
                             max_states, format, output);
    if (sim->parsed()) return cmd_simulate(input, supervisor_path);
    if (dot->parsed()) return cmd_export_dot(input, supervisor_path, output);
    if (fix->parsed()) return cmd_fixture_check(fixture_files);
  } catch (const CapacityError& e) {
    std::cerr << "resource cap: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
