#include "opacsyn/supervisor.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace opacsyn {

int Supervisor::walk(const Word& observation) const {
  int m = initial;
  for (int e : observation) {
    if (m < 0) return -1;
    auto it = nodes[m].next.find(e);
    m = it == nodes[m].next.end() ? -1 : it->second;
  }
  return m;
}

EventSet Supervisor::decision(const Word& observation) const {
  int m = walk(observation);
  if (m < 0) throw SemanticError("observation not generated by supervisor");
  return nodes[m].decision;
}

Supervisor Supervisor::enable_all(const Automaton& a) {
  return constant(a, a.all_events());
}

Supervisor Supervisor::constant(const Automaton& a, EventSet enabled) {
  Supervisor s;
  Node n;
  n.decision = a.admissible(enabled);
  for_each_event(n.decision & a.observable(), [&](int e) { n.next[e] = 0; });
  s.nodes.push_back(std::move(n));
  s.initial = 0;
  return s;
}

std::string supervisor_to_json(const Supervisor& s, const Automaton& a) {
  nlohmann::ordered_json j;
  j["memory_states"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    nlohmann::ordered_json m;
    m["id"] = i;
    m["decision"] = a.event_names_of(s.nodes[i].decision);
    if (s.nodes[i].budget != Supervisor::kNoBudget)
      m["budget"] = s.nodes[i].budget;
    j["memory_states"].push_back(std::move(m));
  }
  j["initial"] = s.initial;
  j["transitions"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < s.nodes.size(); ++i)
    for (auto& [e, t] : s.nodes[i].next) {
      nlohmann::ordered_json tr;
      tr["from"] = i;
      tr["event"] = a.event_name(e);
      tr["to"] = t;
      j["transitions"].push_back(std::move(tr));
    }
  return j.dump(2) + "\n";
}

Supervisor supervisor_from_json(const std::string& text, const Automaton& a) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("invalid supervisor JSON: ") + e.what());
  }
  Supervisor s;
  for (auto& m : j.at("memory_states")) {
    Supervisor::Node n;
    for (auto& ev : m.at("decision"))
      n.decision |= event_bit(a.event_id(ev.get<std::string>()));
    if (m.contains("budget")) n.budget = m.at("budget").get<std::int64_t>();
    s.nodes.push_back(std::move(n));
  }
  s.initial = j.at("initial").get<int>();
  for (auto& tr : j.at("transitions")) {
    int from = tr.at("from").get<int>();
    int e = a.event_id(tr.at("event").get<std::string>());
    s.nodes.at(from).next[e] = tr.at("to").get<int>();
  }
  if (s.initial < 0 || s.initial >= static_cast<int>(s.nodes.size()))
    throw SemanticError("supervisor initial state out of range");
  return s;
}

std::string supervisor_to_dot(const Supervisor& s, const Automaton& a) {
  std::ostringstream os;
  os << "digraph supervisor {\n  rankdir=LR;\n  node [shape=box];\n";
  os << "  __init [shape=point, style=invis];\n";
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    os << "  m" << i << " [label=\"{";
    auto names = a.event_names_of(s.nodes[i].decision & a.controllable());
    for (std::size_t k = 0; k < names.size(); ++k)
      os << (k ? "," : "") << names[k];
    os << "}";
    if (s.nodes[i].budget != Supervisor::kNoBudget)
      os << "\\nbudget=" << s.nodes[i].budget;
    os << "\"];\n";
  }
  os << "  __init -> m" << s.initial << ";\n";
  for (std::size_t i = 0; i < s.nodes.size(); ++i)
    for (auto& [e, t] : s.nodes[i].next)
      os << "  m" << i << " -> m" << t << " [label=\"" << a.event_name(e)
         << "\"];\n";
  os << "}\n";
  return os.str();
}

DecisionChooser lex_chooser() {
  // max_decision_edges already orders candidates by display form.
  return [](const GameGraph&, const Automaton&, int,
            const std::vector<int>& candidates) {
    (void)candidates;
    return 0;
  };
}

std::optional<Supervisor> extract_supervisor(const GameGraph& solved,
                                             const Automaton& a,
                                             const DecisionChooser& choose) {
  if (solved.empty()) return std::nullopt;
  Supervisor s;
  std::unordered_map<int, int> mem_of_z;

  auto pick = [&](int y) {
    std::vector<int> cand = max_decision_edges(solved, a, y);
    int c = choose(solved, a, y, cand);
    return solved.ys[y].succ[cand.at(c)].second;
  };
  std::deque<int> frontier;
  auto intern = [&](int z) {
    auto [it, inserted] = mem_of_z.emplace(z, static_cast<int>(s.nodes.size()));
    if (inserted) {
      Supervisor::Node n;
      n.decision = solved.zs[z].rep;
      s.nodes.push_back(std::move(n));
      frontier.push_back(z);
    }
    return it->second;
  };

  s.initial = intern(pick(solved.initial));
  while (!frontier.empty()) {
    int z = frontier.front();
    frontier.pop_front();
    int mem = mem_of_z.at(z);
    for (auto& [sigma, y] : solved.zs[z].succ)
      s.nodes[mem].next[sigma] = intern(pick(y));
  }
  return s;
}

std::vector<Supervisor> extract_all_supervisors(const GameGraph& solved,
                                                const Automaton& a,
                                                std::size_t cap) {
  std::vector<Supervisor> out;
  if (solved.empty()) return out;

  // Branch over maximal decisions at every Y-state the supervisor reaches.
  std::vector<int> assignment(solved.ys.size(), -1);
  auto rec = [&](auto&& self, std::vector<int> pending) -> void {
    while (!pending.empty()) {
      int y = pending.back();
      pending.pop_back();
      if (assignment[y] >= 0) continue;
      std::vector<int> cand = max_decision_edges(solved, a, y);
      for (int idx : cand) {
        assignment[y] = idx;
        std::vector<int> next = pending;
        int z = solved.ys[y].succ[idx].second;
        for (auto& [sigma, y2] : solved.zs[z].succ) next.push_back(y2);
        self(self, std::move(next));
      }
      assignment[y] = -1;
      return;
    }
    // Complete assignment for the reached part: materialize a supervisor.
    if (out.size() >= cap)
      throw CapacityError("supervisor enumeration exceeded cap");
    DecisionChooser fixed = [&assignment](const GameGraph&, const Automaton&,
                                          int y, const std::vector<int>& cand) {
      for (std::size_t i = 0; i < cand.size(); ++i)
        if (cand[i] == assignment[y]) return static_cast<int>(i);
      return 0;
    };
    out.push_back(*extract_supervisor(solved, a, fixed));
  };
  rec(rec, {solved.initial});
  return out;
}

std::vector<Word> closed_loop(const Automaton& a, const Supervisor& s,
                              int max_len, std::size_t cap) {
  std::vector<Word> out;
  struct Item {
    Word w;
    int x;
    int mem;
  };
  std::deque<Item> frontier;
  frontier.push_back({{}, a.initial(), s.initial});
  while (!frontier.empty()) {
    Item it = std::move(frontier.front());
    frontier.pop_front();
    out.push_back(it.w);
    if (out.size() > cap) throw CapacityError("closed-loop enumeration cap");
    if (static_cast<int>(it.w.size()) == max_len) continue;
    EventSet enabled = s.nodes[it.mem].decision;
    for (int e = 0; e < a.num_events(); ++e) {
      if (!(enabled & event_bit(e))) continue;
      int y = a.delta(it.x, e);
      if (y == kNoState) continue;
      int mem = it.mem;
      if (a.is_observable(e)) {
        auto nx = s.nodes[mem].next.find(e);
        if (nx == s.nodes[mem].next.end())
          throw SemanticError("supervisor lacks a move for feasible event '" +
                              a.event_name(e) + "'");
        mem = nx->second;
      }
      Word w = it.w;
      w.push_back(e);
      frontier.push_back({std::move(w), y, mem});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Automaton compose(const Automaton& a, const Supervisor& s) {
  struct Key {
    int x, mem;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return hash_combine(k.x, k.mem);
    }
  };
  std::vector<Key> states;
  std::unordered_map<Key, int, KeyHash> ids;
  auto intern = [&](Key k) {
    auto [it, inserted] = ids.emplace(k, static_cast<int>(states.size()));
    if (inserted) {
      if (states.size() >= StateSet::kCapacity)
        throw CapacityError("closed-loop product exceeds state capacity");
      states.push_back(k);
    }
    return it->second;
  };
  intern({a.initial(), s.initial});
  std::vector<std::array<int, 3>> edges;
  for (std::size_t head = 0; head < states.size(); ++head) {
    Key cur = states[head];
    EventSet enabled = s.nodes[cur.mem].decision;
    for (int e = 0; e < a.num_events(); ++e) {
      if (!(enabled & event_bit(e))) continue;
      int y = a.delta(cur.x, e);
      if (y == kNoState) continue;
      int mem = cur.mem;
      if (a.is_observable(e)) {
        auto nx = s.nodes[mem].next.find(e);
        if (nx == s.nodes[mem].next.end())
          throw SemanticError("supervisor lacks a move for feasible event '" +
                              a.event_name(e) + "'");
        mem = nx->second;
      }
      edges.push_back({static_cast<int>(head), e, intern({y, mem})});
    }
  }
  std::vector<std::string> names(states.size());
  StateSet secret;
  for (std::size_t i = 0; i < states.size(); ++i) {
    names[i] = a.state_name(states[i].x) + "@" + std::to_string(states[i].mem);
    if (a.secret().test(states[i].x)) secret.set(static_cast<int>(i));
  }
  std::vector<std::string> events;
  for (int e = 0; e < a.num_events(); ++e) events.push_back(a.event_name(e));
  std::vector<int> delta(states.size() * events.size(), kNoState);
  for (auto& [from, e, to] : edges) delta[from * events.size() + e] = to;
  return Automaton(std::move(names), std::move(events), 0, secret,
                   a.observable(), a.controllable(), std::move(delta));
}

}  // namespace opacsyn
