#include "opacsyn/fixture.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "opacsyn/abts.hpp"
#include "opacsyn/estimation.hpp"
#include "opacsyn/info_state.hpp"
#include "opacsyn/oracle.hpp"

namespace opacsyn {

namespace {

using nlohmann::json;

StateSet parse_states(const Automaton& a, const json& j) {
  StateSet s;
  for (auto& v : j) s.set(a.state_id(v.get<std::string>()));
  return s;
}

EventSet parse_events(const Automaton& a, const json& j) {
  EventSet s = 0;
  for (auto& v : j) s |= event_bit(a.event_id(v.get<std::string>()));
  return s;
}

PairRelation parse_relation(const Automaton& a, const json& j) {
  PairRelation r(a.num_states());
  for (auto& p : j)
    r.add(a.state_id(p.at(0).get<std::string>()),
          a.state_id(p.at(1).get<std::string>()));
  return r;
}

json states_json(const Automaton& a, const StateSet& s) {
  json out = json::array();
  s.for_each([&](int x) { out.push_back(a.state_name(x)); });
  return out;
}

json relation_json(const Automaton& a, const PairRelation& r) {
  json out = json::array();
  for (std::size_t o = 0; o < r.rows.size(); ++o)
    r.rows[o].for_each([&](int c) {
      out.push_back(json::array(
          {a.state_name(static_cast<int>(o)), a.state_name(c)}));
    });
  return out;
}

json word_json(const Automaton& a, const Word& w) {
  return json(a.format_word(w));
}

/// Oracle policies referenced by the records: "enable_all" or
/// {"disable_initially": [events]} (everything enabled after the first
/// observation).
ObsPolicy parse_policy(const Automaton& a, const json& j) {
  if (j.is_string() && j.get<std::string>() == "enable_all")
    return enable_all_policy(a);
  if (j.is_object() && j.contains("disable_initially")) {
    EventSet off = parse_events(a, j.at("disable_initially"));
    EventSet initial = a.admissible(a.all_events() & ~off);
    EventSet later = a.all_events();
    return [initial, later](const Word& w) {
      return w.empty() ? initial : later;
    };
  }
  throw SemanticError("unknown oracle policy in constraint record");
}

struct Context {
  const Automaton& a;
  FixtureReport& report;

  // Built on demand and reused across records.
  std::optional<GameGraph> solved;
  std::map<int, AugGameGraph> abts;
  std::map<int, ValueTable> values;

  const GameGraph& solved_game() {
    if (!solved) solved = solve_safety_game(a);
    return *solved;
  }
  const AugGameGraph& abts_for(int n_max) {
    auto it = abts.find(n_max);
    if (it == abts.end())
      it = abts.emplace(n_max, build_total_abts(a, CostFunction::linear(n_max)))
               .first;
    return it->second;
  }
  const ValueTable& values_for(int n_max) {
    auto it = values.find(n_max);
    if (it == values.end())
      it = values
               .emplace(n_max, value_iteration(abts_for(n_max),
                                               CostFunction::linear(n_max)))
               .first;
    return it->second;
  }
};

void expect_eq(Context& ctx, int idx, const std::string& op, const json& got,
               const json& want) {
  ++ctx.report.checks;
  // Compare order-insensitively where the value is a set.
  auto normalize = [](json v) {
    std::function<void(json&)> rec = [&](json& x) {
      if (x.is_object()) {
        for (auto& [key, val] : x.items()) rec(val);
        return;
      }
      if (!x.is_array()) return;
      for (auto& e : x) rec(e);
      std::vector<std::string> dumped;
      for (auto& e : x) dumped.push_back(e.dump());
      std::sort(dumped.begin(), dumped.end());
      json sorted = json::array();
      for (auto& d : dumped) sorted.push_back(json::parse(d));
      x = sorted;
    };
    rec(v);
    return v;
  };
  if (normalize(got) != normalize(want)) {
    std::ostringstream os;
    os << "check " << idx << " (" << op << "): expected " << want.dump()
       << ", got " << got.dump();
    ctx.report.violations.push_back(os.str());
  }
}

json history_json(Context& ctx, const InfoState& s) {
  json out = json::array();
  for (auto& rel : s.history) out.push_back(relation_json(ctx.a, rel));
  return out;
}

json aug_state_json(Context& ctx, const AugInfoState& s, const CostFunction& cf) {
  json out;
  out["current"] = states_json(ctx.a, s.current);
  out["history"] = json::array();
  for (auto& e : s.history) {
    json entry;
    entry["rel"] = relation_json(ctx.a, e.rel);
    entry["age"] = e.age;
    out["history"].push_back(std::move(entry));
  }
  out["cost"] = state_cost(s, cf, ctx.a);
  return out;
}

void run_record(Context& ctx, int idx, const json& rec) {
  const Automaton& a = ctx.a;
  const std::string op = rec.at("op").get<std::string>();
  const json& args = rec.value("args", json::object());
  const json& want = rec.at("expected");

  if (op == "unobservable_reach") {
    StateSet got = unobservable_reach(a, parse_states(a, args.at("q")),
                                      parse_events(a, args.at("gamma")));
    expect_eq(ctx, idx, op, states_json(a, got), want);
  } else if (op == "observable_reach") {
    StateSet got = observable_reach(a, parse_states(a, args.at("q")),
                                    a.event_id(args.at("sigma").get<std::string>()));
    expect_eq(ctx, idx, op, states_json(a, got), want);
  } else if (op == "pair_unobservable_reach") {
    PairRelation got = pair_unobservable_reach(
        a, parse_relation(a, args.at("rho")), parse_events(a, args.at("gamma")));
    expect_eq(ctx, idx, op, relation_json(a, got), want);
  } else if (op == "pair_observable_reach") {
    PairRelation got = pair_observable_reach(
        a, parse_relation(a, args.at("rho")),
        a.event_id(args.at("sigma").get<std::string>()));
    expect_eq(ctx, idx, op, relation_json(a, got), want);
  } else if (op == "stationary_pairs") {
    PairRelation got = stationary_pairs(a, parse_states(a, args.at("q")),
                                        parse_events(a, args.at("gamma")));
    expect_eq(ctx, idx, op, relation_json(a, got), want);
  } else if (op == "run") {
    auto end = run(a, a.parse_word(args.at("string").get<std::string>()));
    expect_eq(ctx, idx, op, end ? json(a.state_name(*end)) : json(nullptr),
              want);
  } else if (op == "project") {
    Word got = project(a, a.parse_word(args.at("string").get<std::string>()));
    expect_eq(ctx, idx, op, word_json(a, got), want);
  } else if (op == "delayed_estimate") {
    ObsPolicy s = parse_policy(a, args.value("policy", json("enable_all")));
    StateSet got = oracle_delayed_estimate(
        a, s, a.parse_word(args.at("alpha_prime").get<std::string>()),
        a.parse_word(args.at("alpha").get<std::string>()));
    expect_eq(ctx, idx, op, states_json(a, got), want);
  } else if (op == "rev_set") {
    ObsPolicy s = parse_policy(a, args.value("policy", json("enable_all")));
    auto got = oracle_rev_set(
        a, s, a.parse_word(args.at("alpha_prime").get<std::string>()),
        a.parse_word(args.at("alpha").get<std::string>()));
    json j = json::array();
    for (auto& w : got) j.push_back(word_json(a, w));
    expect_eq(ctx, idx, op, j, want);
  } else if (op == "run_cost") {
    ObsPolicy s = parse_policy(a, args.value("policy", json("enable_all")));
    auto cf = CostFunction::linear(args.at("n_max").get<int>());
    expect_eq(ctx, idx, op,
              json(run_cost(a, s, cf,
                            a.parse_word(args.at("alpha").get<std::string>()))),
              want);
  } else if (op == "worst_case_cost") {
    ObsPolicy s = parse_policy(a, args.value("policy", json("enable_all")));
    auto cf = CostFunction::linear(args.at("n_max").get<int>());
    int horizon = args.value("horizon", 0);
    if (horizon == 0) {
      auto h = acyclic_observation_horizon(a);
      if (!h) throw SemanticError("worst_case_cost needs a horizon on cyclic plants");
      horizon = *h;
    }
    expect_eq(ctx, idx, op, json(worst_case_cost(a, s, cf, horizon)), want);
  } else if (op == "verify") {
    OpacityVerdict v = verify_infinite_step_opacity(a);
    json got;
    got["opaque"] = v.opaque;
    if (v.witness) {
      got["witness"] = {
          {"alpha_prime", a.format_word(v.witness->alpha_prime)},
          {"alpha_beta", a.format_word(v.witness->alpha_beta)},
          {"estimate_at_reveal", states_json(a, v.witness->estimate_at_reveal)},
          {"estimate_at_instant",
           states_json(a, v.witness->estimate_at_instant)}};
    }
    expect_eq(ctx, idx, op, got, want);
  } else if (op == "info_trace") {
    bool simplify = args.value("simplify", false);
    InfoState s =
        initial_info_state(a, parse_events(a, args.at("gamma0")), simplify);
    json got = json::array();
    got.push_back(json{{"current", states_json(a, s.current)},
                       {"history", history_json(ctx, s)}});
    for (auto& step : args.at("steps")) {
      s = update_info_state(s, a.event_id(step.at("sigma").get<std::string>()),
                            parse_events(a, step.at("gamma")), a, simplify);
      got.push_back(json{{"current", states_json(a, s.current)},
                         {"history", history_json(ctx, s)}});
    }
    expect_eq(ctx, idx, op, got, want);
  } else if (op == "aug_trace") {
    bool simplify = args.value("simplify", false);
    auto cf = CostFunction::linear(args.at("n_max").get<int>());
    AugInfoState s =
        aug_initial(a, parse_events(a, args.at("gamma0")), simplify);
    json got = json::array();
    got.push_back(aug_state_json(ctx, s, cf));
    for (auto& step : args.at("steps")) {
      s = aug_update(s, a.event_id(step.at("sigma").get<std::string>()),
                     parse_events(a, step.at("gamma")), a, cf, simplify);
      got.push_back(aug_state_json(ctx, s, cf));
    }
    expect_eq(ctx, idx, op, got, want);
  } else if (op == "revealing_count") {
    GameGraph total = build_total_bts(a);
    int n = 0;
    for (auto& z : total.zs)
      if (is_revealing(z.info, a)) ++n;
    expect_eq(ctx, idx, op, json(n), want);
  } else if (op == "fixpoint_rounds") {
    GameGraph total = build_total_bts(a);
    FixpointResult fr = consistency_fixpoint(prune_revealing(total, a));
    expect_eq(ctx, idx, op, json(fr.removed_per_round), want);
  } else if (op == "max_decisions") {
    const GameGraph& g = ctx.solved_game();
    json got = json::array();
    if (!g.empty())
      for (EventSet d : max_decisions(g, a, g.initial))
        got.push_back(a.event_names_of(d & a.controllable()));
    expect_eq(ctx, idx, op, got, want);
  } else if (op == "abts_state") {
    int n_max = args.at("n_max").get<int>();
    const AugGameGraph& g = ctx.abts_for(n_max);
    const ValueTable& v = ctx.values_for(n_max);
    auto cf = CostFunction::linear(n_max);
    StateSet cur = parse_states(a, args.at("current"));
    std::vector<AgedRelation> hist;
    for (auto& h : args.at("history"))
      hist.push_back({parse_relation(a, h.at("rel")), h.at("age").get<int>()});
    AugInfoState key{cur, hist};
    key.canonicalize();
    json got;
    int found = 0;
    if (args.at("kind") == "Y") {
      for (std::size_t i = 0; i < g.ys.size(); ++i)
        if (g.ys[i].info == key) {
          ++found;
          got = {{"value", v.y_value[i] == kInfiniteValue
                               ? json("inf")
                               : json(v.y_value[i])}};
        }
    } else {
      EventSet dec = parse_events(a, args.at("decision"));
      for (std::size_t i = 0; i < g.zs.size(); ++i)
        if (g.zs[i].info == key &&
            (g.zs[i].rep & a.controllable()) == dec) {
          ++found;
          got = {{"cost", g.zs[i].cost},
                 {"value", v.z_value[i] == kInfiniteValue
                               ? json("inf")
                               : json(v.z_value[i])}};
        }
    }
    if (found != 1) {
      ++ctx.report.checks;
      ctx.report.violations.push_back(
          "check " + std::to_string(idx) + " (abts_state): matched " +
          std::to_string(found) + " states, need exactly 1: " + args.dump());
      return;
    }
    expect_eq(ctx, idx, op, got, want);
  } else if (op == "abts_summary") {
    int n_max = args.at("n_max").get<int>();
    const AugGameGraph& g = ctx.abts_for(n_max);
    const ValueTable& v = ctx.values_for(n_max);
    int costly = 0;
    for (auto& z : g.zs)
      if (z.cost > 0) ++costly;
    json got = {{"initial_value", v.initial_value == kInfiniteValue
                                      ? json("inf")
                                      : json(v.initial_value)},
                {"stabilized_round", v.stabilized_round},
                {"costly_z_states", costly}};
    expect_eq(ctx, idx, op, got, want);
  } else if (op == "optimal_decisions") {
    int n_max = args.at("n_max").get<int>();
    const AugGameGraph& g = ctx.abts_for(n_max);
    const ValueTable& v = ctx.values_for(n_max);
    auto sup = extract_optimal_supervisor(g, a, v);
    json got;
    if (!sup) {
      got = json(nullptr);
    } else {
      json decs = json::array();
      for (auto& p : args.at("prefixes")) {
        Word obs = a.parse_word(p.get<std::string>());
        decs.push_back(
            a.event_names_of(sup->decision(obs) & a.controllable()));
      }
      got = {{"decisions", decs},
             {"worst_case",
              worst_case_cost(a, policy_of(a, *sup),
                              CostFunction::linear(n_max),
                              args.value("horizon", 8))}};
    }
    expect_eq(ctx, idx, op, got, want);
  } else {
    throw SemanticError("unknown constraint op '" + op + "'");
  }
}

}  // namespace

FixtureReport check_fixture_text(const std::string& name,
                                 const Automaton& plant,
                                 const std::string& constraints_json) {
  json doc = json::parse(constraints_json);
  FixtureReport report;
  report.name = name;
  Context ctx{plant, report, {}, {}, {}};
  int idx = 0;
  for (auto& rec : doc.at("checks")) {
    try {
      run_record(ctx, idx, rec);
    } catch (const std::exception& e) {
      report.violations.push_back("check " + std::to_string(idx) +
                                  " raised: " + e.what());
    }
    ++idx;
  }
  return report;
}

FixtureReport check_fixture(const std::string& constraints_path) {
  std::ifstream in(constraints_path);
  if (!in) throw SemanticError("cannot open " + constraints_path);
  std::stringstream buf;
  buf << in.rdbuf();
  json doc = json::parse(buf.str());

  auto dir = std::filesystem::path(constraints_path).parent_path();
  auto plant_path = dir / doc.at("automaton").get<std::string>();
  std::ifstream pin(plant_path);
  if (!pin) throw SemanticError("cannot open " + plant_path.string());
  std::stringstream pbuf;
  pbuf << pin.rdbuf();
  Automaton plant = parse_automaton(pbuf.str());
  return check_fixture_text(
      std::filesystem::path(constraints_path).stem().string(), plant,
      buf.str());
}

}  // namespace opacsyn
