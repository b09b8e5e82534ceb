#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opacsyn/bts.hpp"

namespace opacsyn {

/// Finite-memory supervisor: memory states carry the decision in force;
/// observable events move the memory. Quantitative supervisors also carry
/// the remaining cost budget per memory state.
struct Supervisor {
  struct Node {
    EventSet decision = 0;                // full enabled set
    std::int64_t budget = kNoBudget;      // kNoBudget for qualitative
    std::map<int, int> next;              // observable event -> node
  };
  static constexpr std::int64_t kNoBudget = -1;

  std::vector<Node> nodes;
  int initial = -1;

  bool quantitative() const {
    return initial >= 0 && nodes[initial].budget != kNoBudget;
  }

  /// Memory state after an observation sequence, or -1 when the supervisor
  /// never produces that observation.
  int walk(const Word& observation) const;

  /// Decision issued after the given observation (admissible supervisors are
  /// total on their closed-loop observations).
  EventSet decision(const Word& observation) const;

  /// Supervisor that always enables every event.
  static Supervisor enable_all(const Automaton& a);
  /// Constant-decision supervisor (decision is made admissible).
  static Supervisor constant(const Automaton& a, EventSet enabled);
};

std::string supervisor_to_json(const Supervisor& s, const Automaton& a);
Supervisor supervisor_from_json(const std::string& text, const Automaton& a);

/// Decision boxes with observation edges, initial marked.
std::string supervisor_to_dot(const Supervisor& s, const Automaton& a);

/// Picks one of the maximal decision edges at a Y-state (indices into
/// max_decision_edges order).
using DecisionChooser = std::function<int(
    const GameGraph&, const Automaton&, int y, const std::vector<int>&)>;

/// Deterministic default: the maximal decision whose controllable part is
/// lexicographically least by event name.
DecisionChooser lex_chooser();

/// Runs the supervisor game on a solved safety graph. std::nullopt when the
/// graph is empty (the enforcement problem has no solution).
std::optional<Supervisor> extract_supervisor(const GameGraph& solved,
                                             const Automaton& a,
                                             const DecisionChooser& choose);

/// Every supervisor obtainable by branching over maximal decisions at each
/// reached Y-state, in deterministic order. Throws CapacityError past cap.
std::vector<Supervisor> extract_all_supervisors(const GameGraph& solved,
                                                const Automaton& a,
                                                std::size_t cap = 64);

/// L(S/G) truncated at max_len, sorted.
std::vector<Word> closed_loop(const Automaton& a, const Supervisor& s,
                              int max_len, std::size_t cap = 1'000'000);

/// Plant-supervisor product as a plain automaton (secret states inherited),
/// for independent closed-loop verification.
Automaton compose(const Automaton& a, const Supervisor& s);

}  // namespace opacsyn
