#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "opacsyn/aug_info.hpp"
#include "opacsyn/supervisor.hpp"

namespace opacsyn {

/// Brute-force reference implementations. Everything here works from the
/// closed-loop language definitions directly (string enumeration or plain
/// level-graph reachability) and never touches the information-state
/// machinery, so it can sit on the other side of a property test.

/// A supervisor as a bare function of the observation history.
using ObsPolicy = std::function<EventSet(const Word&)>;

ObsPolicy enable_all_policy(const Automaton& a);
ObsPolicy constant_policy(const Automaton& a, EventSet enabled);
ObsPolicy policy_of(const Automaton& a, const Supervisor& s);

/// Depth-bounded tabulation of a supervisor: explicit decisions for
/// observations up to the depth bound, one fallback decision beyond.
struct DecisionTreeSupervisor {
  int depth = 0;
  std::map<Word, EventSet> table;
  EventSet fallback = 0;

  EventSet decision(const Word& observation) const {
    if (static_cast<int>(observation.size()) <= depth) {
      auto it = table.find(observation);
      if (it != table.end()) return it->second;
    }
    return fallback;
  }

  ObsPolicy policy() const {
    return [copy = *this](const Word& w) { return copy.decision(w); };
  }

  /// Transducer over the observation tree plus a fallback sink.
  Supervisor to_supervisor(const Automaton& a) const;
};

/// Observations of the closed loop, sorted, up to max_len events.
std::vector<Word> observations(const Automaton& a, const ObsPolicy& s,
                               int max_len, std::size_t cap = 1'000'000);

/// Delayed state estimate of instant alpha_prime under the longer
/// observation alpha, by forward/backward reachability over the level graph
/// of runs consistent with alpha. Returns the empty set when alpha is not
/// generated.
StateSet oracle_delayed_estimate(const Automaton& a, const ObsPolicy& s,
                                 const Word& alpha_prime, const Word& alpha);

/// The relation {(state at instant alpha_prime, state now)} over the runs
/// consistent with alpha.
PairRelation oracle_pair_relation(const Automaton& a, const ObsPolicy& s,
                                  const Word& alpha_prime, const Word& alpha);

/// Same value by literal string enumeration under the pumping bound
/// (|alpha|+1)*|X|; throws CapacityError past the cap.
StateSet oracle_delayed_estimate_enum(const Automaton& a, const ObsPolicy& s,
                                      const Word& alpha_prime,
                                      const Word& alpha,
                                      std::size_t cap = 1'000'000);

/// Observations between alpha_prime and alpha (inclusive) at which the visit
/// of a secret state at instant alpha_prime stands revealed.
std::vector<Word> oracle_rev_set(const Automaton& a, const ObsPolicy& s,
                                 const Word& alpha_prime, const Word& alpha);

/// Total revelation cost of an observation, from the cost definitions and
/// the oracle estimates. Throws SemanticError when alpha is not generated.
std::int64_t run_cost(const Automaton& a, const ObsPolicy& s,
                      const CostFunction& cf, const Word& alpha);

/// Worst run_cost over all observations up to the horizon.
std::int64_t worst_case_cost(const Automaton& a, const ObsPolicy& s,
                             const CostFunction& cf, int horizon);

/// Longest observation the plant can produce, or nullopt when it has cycles.
std::optional<int> acyclic_observation_horizon(const Automaton& a);

struct SearchCaps {
  int max_controllable = 4;
  int max_depth = 4;
  std::size_t max_assignments = 1'000'000;
};

/// Whether any depth-bounded decision-tree supervisor makes the closed loop
/// infinite-step opaque.
bool exhaustive_qualitative_search(const Automaton& a, int depth,
                                   const SearchCaps& caps = {});

/// Minimal achievable worst-case revelation cost over all decision-tree
/// supervisors tabulated to the full horizon (meant for acyclic plants whose
/// observations fit the horizon).
std::int64_t exhaustive_min_cost(const Automaton& a, const CostFunction& cf,
                                 int horizon, const SearchCaps& caps = {});

}  // namespace opacsyn
