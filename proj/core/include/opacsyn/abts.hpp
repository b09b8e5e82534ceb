#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opacsyn/aug_info.hpp"
#include "opacsyn/supervisor.hpp"

namespace opacsyn {

struct AYNode {
  AugInfoState info;
  std::vector<std::pair<EventSet, int>> succ;  // (effective decision, z id)
};

struct AZNode {
  AugInfoState info;
  EventSet effective = 0;
  EventSet rep = 0;
  std::int64_t cost = 0;                  // revelation cost of this state
  std::vector<std::pair<int, int>> succ;  // (observable event, y id)
};

struct AugGameGraph {
  std::vector<AYNode> ys;
  std::vector<AZNode> zs;
  int initial = -1;

  bool empty() const { return initial < 0; }
  int num_nodes() const {
    return static_cast<int>(ys.size() + zs.size());
  }
};

/// Reachable all-feasible augmented game graph; each Z-state is annotated
/// with its revelation cost.
AugGameGraph build_total_abts(const Automaton& a, const CostFunction& cf,
                              bool simplify = true,
                              std::size_t max_nodes = 1'000'000);

/// Min-max total-cost fixpoint. Combined node index: Y-states first, then
/// Z-states, both in graph order.
struct ValueTable {
  std::vector<std::int64_t> y_value;  // kInfiniteValue when diverging
  std::vector<std::int64_t> z_value;
  /// Per-round values (combined index), kept until stabilization for the CSV
  /// dump; rounds[0] is the all-zero start.
  std::vector<std::vector<std::int64_t>> rounds;
  /// Last round whose update changed some value.
  int stabilized_round = 0;
  /// Values at or above this bound are classified as infinite.
  std::int64_t divergence_bound = 0;
  std::int64_t initial_value = kInfiniteValue;
};

ValueTable value_iteration(const AugGameGraph& g, const CostFunction& cf);

/// Rows = states, columns = rounds, matching the per-round table layout.
std::string value_table_csv(const AugGameGraph& g, const ValueTable& v);

/// Picks among the maximal in-budget decision edges at a Y-state (indices
/// into their display order).
using BudgetChooser =
    std::function<int(int y, std::int64_t budget, const std::vector<int>&)>;

/// First candidate in display order.
BudgetChooser lex_budget_chooser();

/// Budget-tracking optimal supervisor. std::nullopt when no supervisor
/// achieves finite worst-case cost.
std::optional<Supervisor> extract_optimal_supervisor(
    const AugGameGraph& g, const Automaton& a, const ValueTable& v,
    const BudgetChooser& choose = lex_budget_chooser());

/// Every optimal supervisor obtainable by branching over maximal in-budget
/// decisions, in deterministic order.
std::vector<Supervisor> extract_all_optimal_supervisors(
    const AugGameGraph& g, const Automaton& a, const ValueTable& v,
    std::size_t cap = 64);

}  // namespace opacsyn
