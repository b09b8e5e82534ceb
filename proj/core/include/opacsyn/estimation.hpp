#pragma once

#include <optional>
#include <vector>

#include "opacsyn/automaton.hpp"
#include "opacsyn/sets.hpp"

namespace opacsyn {

/// Relation over state pairs (origin, current), stored row-per-origin so the
/// reach operators become row-wise set operations. rows.size() equals the
/// plant's state count; an origin with an empty row is not in the relation.
struct PairRelation {
  std::vector<StateSet> rows;

  PairRelation() = default;
  explicit PairRelation(int num_states) : rows(num_states) {}

  bool empty() const {
    for (auto& r : rows)
      if (!r.empty()) return false;
    return true;
  }

  void add(int origin, int current) { rows[origin].set(current); }
  bool contains(int origin, int current) const {
    return rows[origin].test(current);
  }

  /// First components ({x : (x, x') in rho}).
  StateSet origins() const {
    StateSet s;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (!rows[i].empty()) s.set(static_cast<int>(i));
    return s;
  }

  StateSet currents() const {
    StateSet s;
    for (auto& r : rows) s |= r;
    return s;
  }

  int size() const {
    int n = 0;
    for (auto& r : rows) n += r.count();
    return n;
  }

  bool operator==(const PairRelation&) const = default;
  auto operator<=>(const PairRelation&) const = default;

  std::size_t hash() const {
    std::size_t h = rows.size();
    for (auto& r : rows) h = hash_combine(h, r.hash());
    return h;
  }
};

/// States reachable from q via strings of enabled unobservable events.
StateSet unobservable_reach(const Automaton& a, StateSet q, EventSet gamma);

/// One-step successors of q under observable event sigma.
StateSet observable_reach(const Automaton& a, StateSet q, int sigma);

/// Unobservable reach applied to the current components; origins unchanged.
PairRelation pair_unobservable_reach(const Automaton& a,
                                     const PairRelation& rho, EventSet gamma);

/// Observable reach applied to the current components; pairs whose current
/// state has no sigma-successor are dropped.
PairRelation pair_observable_reach(const Automaton& a, const PairRelation& rho,
                                   int sigma);

/// {(x, y) : x in q, y reachable from x via enabled unobservable strings}.
PairRelation stationary_pairs(const Automaton& a, StateSet q, EventSet gamma);

struct OpacityWitness {
  Word alpha_prime;
  Word alpha_beta;
  StateSet estimate_at_reveal;   // delayed estimate of alpha_prime under alpha_beta
  StateSet estimate_at_instant;  // estimate of alpha_prime at its own instant
};

struct OpacityVerdict {
  bool opaque;
  std::optional<OpacityWitness> witness;
};

/// Open-loop infinite-step opacity check. Runs the information-state
/// updating rule with the constant full-enablement decision; with everything
/// enabled the closed loop equals the plant, so this is sound and complete.
OpacityVerdict verify_infinite_step_opacity(const Automaton& a,
                                            std::size_t max_nodes = 1'000'000);

}  // namespace opacsyn
