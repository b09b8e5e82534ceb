#include "opacsyn/abts.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace opacsyn {

namespace {

/// Per-round values are kept for the CSV dump only; diverging instances can
/// iterate for a long time, so recording stops here while the iteration
/// itself runs on.
constexpr std::size_t kMaxRecordedRounds = 4096;

AugInfoState aug_after_decision(const Automaton& a, const AugInfoState& s,
                                EventSet gamma, bool simplify) {
  AugInfoState out;
  out.current = unobservable_reach(a, s.current, gamma);
  out.history.reserve(s.history.size() + 1);
  for (const auto& e : s.history) {
    PairRelation next = pair_unobservable_reach(a, e.rel, gamma);
    if (!next.empty()) out.history.push_back({std::move(next), e.age});
  }
  if (!simplify || out.current.intersects(a.secret())) {
    PairRelation stat = stationary_pairs(a, out.current, gamma);
    if (!stat.empty()) out.history.push_back({std::move(stat), 0});
  }
  out.canonicalize();
  return out;
}

/// Revealed entries are consumed here and survivors age by one; entries
/// reaching the window fall off.
AugInfoState aug_after_observation(const Automaton& a, const AugInfoState& s,
                                   int sigma, int window) {
  const StateSet secret = a.secret();
  AugInfoState out;
  out.current = observable_reach(a, s.current, sigma);
  for (const auto& e : s.history) {
    StateSet o = e.rel.origins();
    if (!o.empty() && o.subset_of(secret)) continue;
    if (e.age + 1 >= window) continue;
    PairRelation next = pair_observable_reach(a, e.rel, sigma);
    if (!next.empty()) out.history.push_back({std::move(next), e.age + 1});
  }
  out.canonicalize();
  return out;
}

struct ZKey {
  AugInfoState info;
  EventSet effective;
  bool operator==(const ZKey&) const = default;
};
struct ZKeyHash {
  std::size_t operator()(const ZKey& k) const {
    return hash_combine(k.info.hash(), k.effective);
  }
};

}  // namespace

AugGameGraph build_total_abts(const Automaton& a, const CostFunction& cf,
                              bool simplify, std::size_t max_nodes) {
  AugGameGraph g;
  std::unordered_map<AugInfoState, int, AugInfoStateHash> y_ids;
  std::unordered_map<ZKey, int, ZKeyHash> z_ids;

  std::vector<int> ctrl;
  for_each_event(a.controllable(), [&](int e) { ctrl.push_back(e); });

  auto intern_y = [&](AugInfoState info) {
    auto [it, inserted] = y_ids.emplace(info, static_cast<int>(g.ys.size()));
    if (inserted) {
      g.ys.push_back(AYNode{std::move(info), {}});
      if (g.ys.size() + g.zs.size() > max_nodes)
        throw CapacityError("augmented game graph exceeded state cap");
    }
    return it->second;
  };

  AugInfoState root;
  root.current = StateSet::single(a.initial());
  root.canonicalize();
  g.initial = intern_y(root);

  for (std::size_t yi = 0; yi < g.ys.size(); ++yi) {
    const AugInfoState y_info = g.ys[yi].info;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ctrl.size());
         ++mask) {
      EventSet gamma = a.uncontrollable();
      for (std::size_t i = 0; i < ctrl.size(); ++i)
        if (mask & (std::uint64_t{1} << i)) gamma |= event_bit(ctrl[i]);

      StateSet closure = unobservable_reach(a, y_info.current, gamma);
      EventSet executable = executable_events(a, closure);
      EventSet eff = gamma & executable;
      bool dup = false;
      for (auto& [e, _] : g.ys[yi].succ)
        if (e == eff) {
          dup = true;
          break;
        }
      if (dup) continue;

      ZKey key{aug_after_decision(a, y_info, gamma, simplify), eff};
      auto [it, inserted] = z_ids.emplace(key, static_cast<int>(g.zs.size()));
      int zi = it->second;
      if (inserted) {
        AZNode z;
        z.info = key.info;
        z.effective = eff;
        z.rep = eff | (a.all_events() & ~executable);
        z.cost = state_cost(z.info, cf, a);
        g.zs.push_back(std::move(z));
        if (g.ys.size() + g.zs.size() > max_nodes)
          throw CapacityError("augmented game graph exceeded state cap");
        for_each_event(eff & a.observable(), [&](int sigma) {
          AugInfoState next =
              aug_after_observation(a, g.zs[zi].info, sigma, cf.window());
          int target = intern_y(std::move(next));
          g.zs[zi].succ.push_back({sigma, target});
        });
      }
      g.ys[yi].succ.push_back({eff, zi});
    }
    std::sort(g.ys[yi].succ.begin(), g.ys[yi].succ.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
  }
  return g;
}

ValueTable value_iteration(const AugGameGraph& g, const CostFunction& cf) {
  ValueTable vt;
  const int ny = static_cast<int>(g.ys.size());
  const int nz = static_cast<int>(g.zs.size());
  const std::int64_t n = ny + nz;
  const std::int64_t bound = n * cf.state_cost_bound();
  const std::int64_t cutoff = n * bound;  // round budget n^2 * N'_max
  vt.divergence_bound = bound;

  // Values are clamped at the divergence bound: anything at or above it is
  // classified infinite, and clamping keeps every finite value exact while
  // forcing stabilization within the round budget.
  std::vector<std::int64_t> y_cur(ny, 0), z_cur(nz, 0);
  auto snapshot = [&]() {
    std::vector<std::int64_t> row;
    row.reserve(n);
    row.insert(row.end(), y_cur.begin(), y_cur.end());
    row.insert(row.end(), z_cur.begin(), z_cur.end());
    return row;
  };
  vt.rounds.push_back(snapshot());

  for (std::int64_t round = 1; round <= cutoff; ++round) {
    std::vector<std::int64_t> y_next(ny), z_next(nz);
    for (int y = 0; y < ny; ++y) {
      assert(!g.ys[y].succ.empty());
      std::int64_t best = kInfiniteValue;
      for (auto& [eff, z] : g.ys[y].succ) best = std::min(best, z_cur[z]);
      y_next[y] = best;
    }
    for (int z = 0; z < nz; ++z) {
      std::int64_t worst = 0;  // a dead-end Z-state generates nothing further
      for (auto& [sigma, y] : g.zs[z].succ) worst = std::max(worst, y_cur[y]);
      z_next[z] = std::min(worst + g.zs[z].cost, bound);
    }
    bool changed = y_next != y_cur || z_next != z_cur;
    y_cur = std::move(y_next);
    z_cur = std::move(z_next);
    if (!changed) break;
    vt.stabilized_round = static_cast<int>(round);
    if (vt.rounds.size() <= kMaxRecordedRounds) vt.rounds.push_back(snapshot());
  }

  vt.y_value.resize(ny);
  vt.z_value.resize(nz);
  for (int y = 0; y < ny; ++y)
    vt.y_value[y] = y_cur[y] < bound ? y_cur[y] : kInfiniteValue;
  for (int z = 0; z < nz; ++z)
    vt.z_value[z] = z_cur[z] < bound ? z_cur[z] : kInfiniteValue;
  vt.initial_value = g.initial >= 0 ? vt.y_value[g.initial] : kInfiniteValue;
  return vt;
}

std::string value_table_csv(const AugGameGraph& g, const ValueTable& v) {
  std::ostringstream os;
  os << "state,kind,cost";
  for (std::size_t r = 0; r < v.rounds.size(); ++r) os << ",V" << r;
  os << ",Vstar\n";
  auto put = [&](std::int64_t x) {
    if (x == kInfiniteValue)
      os << ",inf";
    else
      os << ',' << x;
  };
  for (std::size_t y = 0; y < g.ys.size(); ++y) {
    os << 'y' << y << ",Y,0";
    for (auto& row : v.rounds) put(row[y]);
    put(v.y_value[y]);
    os << '\n';
  }
  for (std::size_t z = 0; z < g.zs.size(); ++z) {
    os << 'z' << z << ",Z," << g.zs[z].cost;
    for (auto& row : v.rounds) put(row[g.ys.size() + z]);
    put(v.z_value[z]);
    os << '\n';
  }
  return os.str();
}

namespace {

/// Edges at y whose Z-value fits the remaining budget, reduced to maximal
/// effective parts and ordered by the display form of the representative.
std::vector<int> in_budget_maximal_edges(const AugGameGraph& g,
                                         const Automaton& a,
                                         const ValueTable& v, int y,
                                         std::int64_t budget) {
  const auto& succ = g.ys[y].succ;
  std::vector<int> fit;
  for (std::size_t i = 0; i < succ.size(); ++i) {
    std::int64_t val = v.z_value[succ[i].second];
    if (val != kInfiniteValue && val <= budget)
      fit.push_back(static_cast<int>(i));
  }
  std::vector<int> maximal;
  for (int i : fit) {
    bool dominated = false;
    for (int j : fit) {
      if (i == j) continue;
      EventSet ei = succ[i].first, ej = succ[j].first;
      if (ei != ej && (ei & ej) == ei) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.push_back(i);
  }
  std::sort(maximal.begin(), maximal.end(), [&](int l, int r) {
    return a.event_names_of(g.zs[succ[l].second].rep & a.controllable()) <
           a.event_names_of(g.zs[succ[r].second].rep & a.controllable());
  });
  return maximal;
}

std::optional<Supervisor> extract_with(const AugGameGraph& g,
                                       const Automaton& a, const ValueTable& v,
                                       const BudgetChooser& choose) {
  if (g.empty() || v.initial_value == kInfiniteValue) return std::nullopt;

  struct Key {
    int z;
    std::int64_t budget;  // remaining budget after paying this state's cost
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return hash_combine(k.z, static_cast<std::size_t>(k.budget));
    }
  };
  Supervisor s;
  std::unordered_map<Key, int, KeyHash> mem;
  std::deque<Key> frontier;

  auto pick = [&](int y, std::int64_t budget) {
    std::vector<int> cand = in_budget_maximal_edges(g, a, v, y, budget);
    assert(!cand.empty());
    int c = choose(y, budget, cand);
    int z = g.ys[y].succ[cand.at(c)].second;
    Key k{z, budget - g.zs[z].cost};
    assert(k.budget >= 0);
    return k;
  };
  auto intern = [&](Key k) {
    auto [it, inserted] = mem.emplace(k, static_cast<int>(s.nodes.size()));
    if (inserted) {
      Supervisor::Node n;
      n.decision = g.zs[k.z].rep;
      n.budget = k.budget;
      s.nodes.push_back(std::move(n));
      frontier.push_back(k);
    }
    return it->second;
  };

  s.initial = intern(pick(g.initial, v.initial_value));
  while (!frontier.empty()) {
    Key k = frontier.front();
    frontier.pop_front();
    int m = mem.at(k);
    for (auto& [sigma, y] : g.zs[k.z].succ)
      s.nodes[m].next[sigma] = intern(pick(y, k.budget));
  }
  return s;
}

}  // namespace

BudgetChooser lex_budget_chooser() {
  return [](int, std::int64_t, const std::vector<int>&) { return 0; };
}

std::optional<Supervisor> extract_optimal_supervisor(
    const AugGameGraph& g, const Automaton& a, const ValueTable& v,
    const BudgetChooser& choose) {
  return extract_with(g, a, v, choose);
}

std::vector<Supervisor> extract_all_optimal_supervisors(
    const AugGameGraph& g, const Automaton& a, const ValueTable& v,
    std::size_t cap) {
  std::vector<Supervisor> out;
  if (g.empty() || v.initial_value == kInfiniteValue) return out;

  std::map<std::pair<int, std::int64_t>, int> assignment;
  auto rec = [&](auto&& self,
                 std::vector<std::pair<int, std::int64_t>> pending) -> void {
    while (!pending.empty()) {
      auto yb = pending.back();
      pending.pop_back();
      if (assignment.count(yb)) continue;
      std::vector<int> cand =
          in_budget_maximal_edges(g, a, v, yb.first, yb.second);
      for (int idx : cand) {
        assignment[yb] = idx;
        auto next = pending;
        int z = g.ys[yb.first].succ[idx].second;
        std::int64_t budget = yb.second - g.zs[z].cost;
        for (auto& [sigma, y2] : g.zs[z].succ) next.push_back({y2, budget});
        self(self, std::move(next));
      }
      assignment.erase(yb);
      return;
    }
    if (out.size() >= cap)
      throw CapacityError("supervisor enumeration exceeded cap");
    auto fixed = [&assignment](int y, std::int64_t budget,
                               const std::vector<int>& cand) {
      auto it = assignment.find({y, budget});
      if (it != assignment.end())
        for (std::size_t i = 0; i < cand.size(); ++i)
          if (cand[i] == it->second) return static_cast<int>(i);
      return 0;
    };
    out.push_back(*extract_with(g, a, v, fixed));
  };
  rec(rec, {{g.initial, v.initial_value}});
  return out;
}

}  // namespace opacsyn
