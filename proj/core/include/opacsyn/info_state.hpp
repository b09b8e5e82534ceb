#pragma once

#include <string>
#include <vector>

#include "opacsyn/estimation.hpp"

namespace opacsyn {

/// Information state (current estimate, delayed-estimate relations). The
/// history is kept canonical: empty relations dropped, sorted, deduplicated.
/// Reachable relations for generated observations are nonempty, so pruning
/// empties loses nothing and keeps revelation tests honest.
struct InfoState {
  StateSet current;
  std::vector<PairRelation> history;

  void canonicalize();

  bool operator==(const InfoState&) const = default;

  std::size_t hash() const {
    std::size_t h = current.hash();
    for (auto& r : history) h = hash_combine(h, r.hash());
    return h;
  }
};

struct InfoStateHash {
  std::size_t operator()(const InfoState& s) const { return s.hash(); }
};

/// Information state before any observation, under initial decision gamma0.
/// With simplify on, the stationary relation is omitted when the closure
/// contains no secret state.
InfoState initial_info_state(const Automaton& a, EventSet gamma0,
                             bool simplify);

/// One step of the updating rule: observation sigma followed by new decision
/// gamma.
InfoState update_info_state(const InfoState& s, int sigma, EventSet gamma,
                            const Automaton& a, bool simplify);

/// The set of first components of the history relations.
std::vector<StateSet> d1(const InfoState& s);

/// True iff some history relation's origin set is a nonempty subset of the
/// secret states.
bool is_revealing(const InfoState& s, const Automaton& a);

/// Debug serialization: {"current": [...], "history": [[[x, x'], ...], ...]}.
std::string info_state_to_json(const InfoState& s, const Automaton& a);

}  // namespace opacsyn
