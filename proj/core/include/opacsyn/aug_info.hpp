#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "opacsyn/estimation.hpp"

namespace opacsyn {

/// Sentinel for diverging total costs / values.
constexpr std::int64_t kInfiniteValue =
    std::numeric_limits<std::int64_t>::max();

/// Revelation cost by delay. table[k] is the cost of a secret visit first
/// revealed k observations later; it must be non-increasing and reach 0,
/// and the window is the least such k. Entries at or beyond the window are 0.
struct CostFunction {
  std::vector<std::int64_t> table;

  /// table(k) = max(n_max - k, 0).
  static CostFunction linear(int n_max);

  /// table(k) = 1 for k <= K, 0 beyond: zero optimal cost iff a supervisor
  /// keeps every secret visit hidden for K steps.
  static CostFunction k_step(int K);

  static CostFunction from_table(std::vector<std::int64_t> t);

  std::int64_t at(int k) const {
    return k < static_cast<int>(table.size()) ? table[k] : 0;
  }
  /// Number of ages worth tracking (least k with zero cost).
  int window() const { return static_cast<int>(table.size()); }
  /// Upper bound on any single state's cost: every tracked age revealed at
  /// once.
  std::int64_t state_cost_bound() const {
    std::int64_t s = 0;
    for (auto v : table) s += v;
    return s;
  }
};

struct AgedRelation {
  PairRelation rel;
  int age = 0;

  bool operator==(const AgedRelation&) const = default;
  auto operator<=>(const AgedRelation&) const = default;
};

/// Information state carrying, per delayed relation, the number of
/// observations since its instant. Ages stay below the cost window; entries
/// are dropped once revealed or once they age out.
struct AugInfoState {
  StateSet current;
  std::vector<AgedRelation> history;

  void canonicalize();

  bool operator==(const AugInfoState&) const = default;

  std::size_t hash() const {
    std::size_t h = current.hash();
    for (auto& e : history)
      h = hash_combine(h, hash_combine(e.rel.hash(), e.age));
    return h;
  }
};

struct AugInfoStateHash {
  std::size_t operator()(const AugInfoState& s) const { return s.hash(); }
};

/// Entries whose origin set is a nonempty subset of the secret states.
std::vector<AgedRelation> rev_entries(const AugInfoState& s,
                                      const Automaton& a);

/// Sum of table costs over the revealed entries.
std::int64_t state_cost(const AugInfoState& s, const CostFunction& cf,
                        const Automaton& a);

AugInfoState aug_initial(const Automaton& a, EventSet gamma0, bool simplify);

/// One step of the augmented updating rule: entries already revealed are
/// dropped, survivors age by one and fall off at the window, and the new
/// stationary relation enters at age 0 (omitted under simplify when the new
/// estimate has no secret state).
AugInfoState aug_update(const AugInfoState& s, int sigma, EventSet gamma,
                        const Automaton& a, const CostFunction& cf,
                        bool simplify);

}  // namespace opacsyn
