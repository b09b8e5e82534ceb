#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "opacsyn/errors.hpp"
#include "opacsyn/sets.hpp"

namespace opacsyn {

/// An event sequence over interned event ids.
using Word = std::vector<int>;

constexpr int kNoState = -1;

/// Deterministic partially-observed plant. States and events are interned to
/// dense ids in declaration order; the instance is immutable after parsing and
/// safe to share across threads.
class Automaton {
 public:
  Automaton(std::vector<std::string> state_names,
            std::vector<std::string> event_names, int initial,
            StateSet secret, EventSet observable, EventSet controllable,
            std::vector<int> delta_table);

  int num_states() const { return static_cast<int>(state_names_.size()); }
  int num_events() const { return static_cast<int>(event_names_.size()); }
  int initial() const { return initial_; }
  const StateSet& secret() const { return secret_; }

  EventSet all_events() const { return all_events_; }
  EventSet observable() const { return observable_; }
  EventSet unobservable() const { return all_events_ & ~observable_; }
  EventSet controllable() const { return controllable_; }
  EventSet uncontrollable() const { return all_events_ & ~controllable_; }

  bool is_observable(int e) const { return observable_ & event_bit(e); }
  bool is_controllable(int e) const { return controllable_ & event_bit(e); }

  /// Admissible control decision: uncontrollable events are always enabled.
  EventSet admissible(EventSet enabled) const {
    return (enabled & all_events_) | uncontrollable();
  }

  /// delta(x, e), or kNoState when undefined.
  int delta(int x, int e) const { return delta_[x * num_events() + e]; }

  const std::string& state_name(int x) const { return state_names_[x]; }
  const std::string& event_name(int e) const { return event_names_[e]; }
  int state_id(std::string_view name) const;
  int event_id(std::string_view name) const;

  std::vector<std::string> set_names(const StateSet& s) const;
  std::vector<std::string> event_names_of(EventSet s) const;

  /// Parses an event-name sequence separated by whitespace.
  Word parse_word(std::string_view text) const;
  std::string format_word(const Word& w) const;

 private:
  std::vector<std::string> state_names_;
  std::vector<std::string> event_names_;
  std::unordered_map<std::string, int> state_ids_;
  std::unordered_map<std::string, int> event_ids_;
  int initial_;
  StateSet secret_;
  EventSet observable_;
  EventSet controllable_;
  EventSet all_events_;
  std::vector<int> delta_;
};

/// Parses the line-based plant format, or the JSON mirror when the first
/// non-space character is '{'.
Automaton parse_automaton(const std::string& text);

/// Renders the line-based text format (round-trips through parse_automaton).
std::string format_automaton(const Automaton& a);

/// GraphViz export; secret states are double-circled.
std::string automaton_to_dot(const Automaton& a);

/// Natural projection: erases unobservable events.
Word project(const Automaton& a, const Word& s);

/// Extended transition function from the initial state; std::nullopt when
/// some step is undefined.
std::optional<int> run(const Automaton& a, const Word& s);

/// All generated strings of length <= max_len, sorted. Throws CapacityError
/// when the result would exceed cap.
std::vector<Word> enumerate_language(const Automaton& a, int max_len,
                                     std::size_t cap = 1'000'000);

}  // namespace opacsyn
