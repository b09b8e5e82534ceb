#pragma once

#include <cstdint>
#include <vector>

#include "opacsyn/info_state.hpp"

namespace opacsyn {

/// Events with a transition somewhere in `states`.
EventSet executable_events(const Automaton& a, const StateSet& states);

/// Supervisor-to-environment half step: unobservable reach under gamma plus
/// the stationary relation.
InfoState info_after_decision(const Automaton& a, const InfoState& s,
                              EventSet gamma, bool simplify);

/// Environment-to-supervisor half step: observable reach of every component.
InfoState info_after_observation(const Automaton& a, const InfoState& s,
                                 int sigma);

/// Y-state: the supervisor is about to pick a control decision.
struct YNode {
  InfoState info;
  std::vector<std::pair<EventSet, int>> succ;  // (effective decision, z id)
};

/// Z-state: a decision is in force and the environment picks an observation.
/// `effective` keeps only events executable inside the closure; `rep` is the
/// largest equivalent decision (effective plus everything not executable),
/// which is what gets displayed and serialized. Decisions with equal
/// effective parts behave identically and collapse to one Z-state.
struct ZNode {
  InfoState info;
  EventSet effective = 0;
  EventSet rep = 0;
  std::vector<std::pair<int, int>> succ;  // (observable event, y id)
};

struct GameGraph {
  std::vector<YNode> ys;
  std::vector<ZNode> zs;
  int initial = -1;

  bool empty() const { return initial < 0; }
  EventSet feasible_observations(const Automaton& a, int z) const {
    return zs[z].effective & a.observable();
  }
};

/// Reachable all-feasible game graph: every admissible decision at every
/// Y-state (collapsed by effective part), every feasible observation at every
/// Z-state. Throws CapacityError past max_nodes.
GameGraph build_total_bts(const Automaton& a, bool simplify = true,
                          std::size_t max_nodes = 1'000'000);

/// Drops Z-states whose information state reveals a secret visit.
GameGraph prune_revealing(const GameGraph& g, const Automaton& a);

struct FixpointResult {
  GameGraph graph;
  /// States removed by each application of the consistency operator.
  std::vector<int> removed_per_round;
};

/// Greatest consistent subgraph: every surviving Y-state keeps a decision and
/// every surviving Z-state keeps all its feasible observations; finally
/// restricted to states reachable from the initial Y-state.
FixpointResult consistency_fixpoint(const GameGraph& g);

/// Convenience pipeline: total graph, revealing states pruned, fixpoint.
GameGraph solve_safety_game(const Automaton& a, bool simplify = true,
                            std::size_t max_nodes = 1'000'000);

/// Indices into ys[y].succ whose effective decisions are maximal under
/// inclusion, ordered by the display form of their representative.
std::vector<int> max_decision_edges(const GameGraph& g, const Automaton& a,
                                    int y);

/// Representative decisions of the maximal choices at y (full event sets;
/// uncontrollable events always present).
std::vector<EventSet> max_decisions(const GameGraph& g, const Automaton& a,
                                    int y);

}  // namespace opacsyn
