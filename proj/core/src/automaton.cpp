#include "opacsyn/automaton.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "json.hpp"

namespace opacsyn {

namespace {

std::string trim(std::string s) {
  auto issp = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && issp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && issp(s[i])) ++i;
  return s.substr(i);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

struct Builder {
  std::vector<std::string> state_names;
  std::unordered_map<std::string, int> state_ids;
  std::vector<std::string> event_names;
  std::unordered_map<std::string, int> event_ids;
  std::string initial;
  std::vector<std::string> secret;
  std::vector<std::string> observable;
  std::vector<std::string> controllable;
  std::vector<std::array<std::string, 3>> transitions;

  void add_state(const std::string& name, int line) {
    if (state_ids.count(name))
      throw ParseError(line, "duplicate state declaration '" + name + "'");
    if (static_cast<int>(state_names.size()) >= StateSet::kCapacity)
      throw CapacityError("more than " + std::to_string(StateSet::kCapacity) +
                          " states");
    state_ids[name] = static_cast<int>(state_names.size());
    state_names.push_back(name);
  }

  int intern_event(const std::string& name) {
    auto it = event_ids.find(name);
    if (it != event_ids.end()) return it->second;
    if (event_names.size() >= 64) throw CapacityError("more than 64 events");
    int id = static_cast<int>(event_names.size());
    event_ids[name] = id;
    event_names.push_back(name);
    return id;
  }

  Automaton finish() {
    if (state_names.empty()) throw SemanticError("no states declared");
    if (initial.empty()) throw SemanticError("no initial state declared");
    auto state_of = [&](const std::string& n) {
      auto it = state_ids.find(n);
      if (it == state_ids.end())
        throw SemanticError("unknown state '" + n + "'");
      return it->second;
    };
    // Event universe: declared observable/controllable labels first, then
    // labels that only appear on transitions (those are unobservable and
    // uncontrollable).
    EventSet obs = 0, ctl = 0;
    for (auto& n : observable) obs |= event_bit(intern_event(n));
    for (auto& n : controllable) ctl |= event_bit(intern_event(n));
    for (auto& t : transitions) intern_event(t[1]);

    int n_states = static_cast<int>(state_names.size());
    int n_events = static_cast<int>(event_names.size());
    std::vector<int> delta(static_cast<std::size_t>(n_states) * n_events,
                           kNoState);
    for (auto& t : transitions) {
      int from = state_of(t[0]);
      int e = event_ids.at(t[1]);
      int to = state_of(t[2]);
      int& cell = delta[from * n_events + e];
      if (cell != kNoState)
        throw SemanticError("nondeterministic transitions from state '" +
                            t[0] + "' on event '" + t[1] + "'");
      cell = to;
    }
    StateSet sec;
    for (auto& n : secret) sec.set(state_of(n));
    return Automaton(std::move(state_names), std::move(event_names),
                     state_of(initial), sec, obs, ctl, std::move(delta));
  }
};

Automaton parse_text(const std::string& text) {
  Builder b;
  bool in_transitions = false;
  bool saw_states = false, saw_initial = false, saw_secret = false,
       saw_observable = false, saw_controllable = false;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    std::string s = trim(raw);
    if (s.empty()) continue;
    if (in_transitions) {
      auto toks = split_ws(s);
      if (toks.size() != 3)
        throw ParseError(line, "expected 'FROM EVENT TO', got '" + s + "'");
      b.transitions.push_back({toks[0], toks[1], toks[2]});
      continue;
    }
    auto colon = s.find(':');
    if (colon == std::string::npos)
      throw ParseError(line, "expected 'key: values' before the transitions "
                             "section, got '" + s + "'");
    std::string key = trim(s.substr(0, colon));
    auto values = split_ws(trim(s.substr(colon + 1)));
    auto once = [&](bool& seen) {
      if (seen) throw ParseError(line, "duplicate '" + key + ":' section");
      seen = true;
    };
    if (key == "states") {
      once(saw_states);
      for (auto& n : values) b.add_state(n, line);
    } else if (key == "initial") {
      once(saw_initial);
      if (values.size() != 1)
        throw ParseError(line, "'initial:' takes exactly one state");
      b.initial = values[0];
    } else if (key == "secret") {
      once(saw_secret);
      b.secret = values;
    } else if (key == "observable") {
      once(saw_observable);
      b.observable = values;
    } else if (key == "controllable") {
      once(saw_controllable);
      b.controllable = values;
    } else if (key == "transitions") {
      if (!values.empty())
        throw ParseError(line, "'transitions:' starts a section of its own");
      in_transitions = true;
    } else {
      throw ParseError(line, "unknown section '" + key + "'");
    }
  }
  return b.finish();
}

Automaton parse_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("invalid JSON: ") + e.what());
  }
  auto strings = [&](const char* key) {
    std::vector<std::string> out;
    if (!j.contains(key)) return out;
    for (auto& v : j.at(key)) out.push_back(v.get<std::string>());
    return out;
  };
  Builder b;
  for (auto& n : strings("states")) b.add_state(n, 0);
  if (!j.contains("initial")) throw SemanticError("missing 'initial'");
  b.initial = j.at("initial").get<std::string>();
  b.secret = strings("secret");
  b.observable = strings("observable");
  b.controllable = strings("controllable");
  if (j.contains("transitions")) {
    for (auto& t : j.at("transitions")) {
      if (!t.is_array() || t.size() != 3)
        throw SemanticError("each transition must be [from, event, to]");
      b.transitions.push_back({t[0].get<std::string>(),
                               t[1].get<std::string>(),
                               t[2].get<std::string>()});
    }
  }
  return b.finish();
}

}  // namespace

Automaton::Automaton(std::vector<std::string> state_names,
                     std::vector<std::string> event_names, int initial,
                     StateSet secret, EventSet observable,
                     EventSet controllable, std::vector<int> delta_table)
    : state_names_(std::move(state_names)),
      event_names_(std::move(event_names)),
      initial_(initial),
      secret_(secret),
      observable_(observable),
      controllable_(controllable),
      delta_(std::move(delta_table)) {
  all_events_ = event_names_.size() == 64
                    ? ~EventSet{0}
                    : (EventSet{1} << event_names_.size()) - 1;
  observable_ &= all_events_;
  controllable_ &= all_events_;
  for (std::size_t i = 0; i < state_names_.size(); ++i)
    state_ids_[state_names_[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < event_names_.size(); ++i)
    event_ids_[event_names_[i]] = static_cast<int>(i);
}

int Automaton::state_id(std::string_view name) const {
  auto it = state_ids_.find(std::string(name));
  if (it == state_ids_.end())
    throw SemanticError("unknown state '" + std::string(name) + "'");
  return it->second;
}

int Automaton::event_id(std::string_view name) const {
  auto it = event_ids_.find(std::string(name));
  if (it == event_ids_.end())
    throw SemanticError("unknown event '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> Automaton::set_names(const StateSet& s) const {
  std::vector<std::string> out;
  s.for_each([&](int x) { out.push_back(state_names_[x]); });
  return out;
}

std::vector<std::string> Automaton::event_names_of(EventSet s) const {
  std::vector<std::string> out;
  for_each_event(s, [&](int e) { out.push_back(event_names_[e]); });
  std::sort(out.begin(), out.end());
  return out;
}

Word Automaton::parse_word(std::string_view text) const {
  Word w;
  for (auto& tok : split_ws(std::string(text))) w.push_back(event_id(tok));
  return w;
}

std::string Automaton::format_word(const Word& w) const {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += event_names_[w[i]];
  }
  return out;
}

Automaton parse_automaton(const std::string& text) {
  for (char c : text) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
    if (c == '{') return parse_json(text);
    break;
  }
  return parse_text(text);
}

std::string format_automaton(const Automaton& a) {
  std::ostringstream os;
  auto list = [&](const char* key, const std::vector<std::string>& xs) {
    os << key << ':';
    for (auto& x : xs) os << ' ' << x;
    os << '\n';
  };
  std::vector<std::string> states;
  for (int x = 0; x < a.num_states(); ++x) states.push_back(a.state_name(x));
  list("states", states);
  os << "initial: " << a.state_name(a.initial()) << '\n';
  list("secret", a.set_names(a.secret()));
  list("observable", a.event_names_of(a.observable()));
  list("controllable", a.event_names_of(a.controllable()));
  os << "transitions:\n";
  for (int x = 0; x < a.num_states(); ++x)
    for (int e = 0; e < a.num_events(); ++e)
      if (a.delta(x, e) != kNoState)
        os << a.state_name(x) << ' ' << a.event_name(e) << ' '
           << a.state_name(a.delta(x, e)) << '\n';
  return os.str();
}

std::string automaton_to_dot(const Automaton& a) {
  std::ostringstream os;
  os << "digraph plant {\n  rankdir=LR;\n  node [shape=circle];\n";
  os << "  __init [shape=point, style=invis];\n";
  for (int x = 0; x < a.num_states(); ++x) {
    os << "  s" << x << " [label=\"" << a.state_name(x) << '"';
    if (a.secret().test(x)) os << ", shape=doublecircle";
    os << "];\n";
  }
  os << "  __init -> s" << a.initial() << ";\n";
  for (int x = 0; x < a.num_states(); ++x)
    for (int e = 0; e < a.num_events(); ++e)
      if (a.delta(x, e) != kNoState)
        os << "  s" << x << " -> s" << a.delta(x, e) << " [label=\""
           << a.event_name(e)
           << (a.is_observable(e) ? "" : " (uo)") << "\"];\n";
  os << "}\n";
  return os.str();
}

Word project(const Automaton& a, const Word& s) {
  Word out;
  for (int e : s) {
    if (e < 0 || e >= a.num_events()) throw SemanticError("unknown event id");
    if (a.is_observable(e)) out.push_back(e);
  }
  return out;
}

std::optional<int> run(const Automaton& a, const Word& s) {
  int x = a.initial();
  for (int e : s) {
    x = a.delta(x, e);
    if (x == kNoState) return std::nullopt;
  }
  return x;
}

std::vector<Word> enumerate_language(const Automaton& a, int max_len,
                                     std::size_t cap) {
  std::vector<Word> out;
  std::deque<std::pair<Word, int>> frontier;
  frontier.push_back({{}, a.initial()});
  while (!frontier.empty()) {
    auto [w, x] = std::move(frontier.front());
    frontier.pop_front();
    out.push_back(w);
    if (out.size() > cap)
      throw CapacityError("language enumeration exceeded cap");
    if (static_cast<int>(w.size()) == max_len) continue;
    for (int e = 0; e < a.num_events(); ++e) {
      int y = a.delta(x, e);
      if (y == kNoState) continue;
      Word next = w;
      next.push_back(e);
      frontier.push_back({std::move(next), y});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace opacsyn
