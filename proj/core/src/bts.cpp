#include "opacsyn/bts.hpp"

#include <algorithm>
#include <unordered_map>

namespace opacsyn {

EventSet executable_events(const Automaton& a, const StateSet& states) {
  EventSet out = 0;
  states.for_each([&](int x) {
    for (int e = 0; e < a.num_events(); ++e)
      if (a.delta(x, e) != kNoState) out |= event_bit(e);
  });
  return out;
}

InfoState info_after_decision(const Automaton& a, const InfoState& s,
                              EventSet gamma, bool simplify) {
  InfoState out;
  out.current = unobservable_reach(a, s.current, gamma);
  out.history.reserve(s.history.size() + 1);
  for (const auto& rho : s.history) {
    PairRelation next = pair_unobservable_reach(a, rho, gamma);
    if (!next.empty()) out.history.push_back(std::move(next));
  }
  if (!simplify || out.current.intersects(a.secret())) {
    PairRelation stat = stationary_pairs(a, out.current, gamma);
    if (!stat.empty()) out.history.push_back(std::move(stat));
  }
  out.canonicalize();
  return out;
}

InfoState info_after_observation(const Automaton& a, const InfoState& s,
                                 int sigma) {
  InfoState out;
  out.current = observable_reach(a, s.current, sigma);
  out.history.reserve(s.history.size());
  for (const auto& rho : s.history) {
    PairRelation next = pair_observable_reach(a, rho, sigma);
    if (!next.empty()) out.history.push_back(std::move(next));
  }
  out.canonicalize();
  return out;
}

namespace {

struct ZKey {
  InfoState info;
  EventSet effective;
  bool operator==(const ZKey&) const = default;
};
struct ZKeyHash {
  std::size_t operator()(const ZKey& k) const {
    return hash_combine(k.info.hash(), k.effective);
  }
};

std::vector<EventSet> admissible_decisions(const Automaton& a) {
  std::vector<int> ctrl;
  for_each_event(a.controllable(), [&](int e) { ctrl.push_back(e); });
  std::vector<EventSet> out;
  out.reserve(std::size_t{1} << ctrl.size());
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ctrl.size());
       ++mask) {
    EventSet g = a.uncontrollable();
    for (std::size_t i = 0; i < ctrl.size(); ++i)
      if (mask & (std::uint64_t{1} << i)) g |= event_bit(ctrl[i]);
    out.push_back(g);
  }
  return out;
}

}  // namespace

GameGraph build_total_bts(const Automaton& a, bool simplify,
                          std::size_t max_nodes) {
  GameGraph g;
  std::unordered_map<InfoState, int, InfoStateHash> y_ids;
  std::unordered_map<ZKey, int, ZKeyHash> z_ids;
  const std::vector<EventSet> decisions = admissible_decisions(a);

  auto intern_y = [&](InfoState info) {
    auto [it, inserted] = y_ids.emplace(info, static_cast<int>(g.ys.size()));
    if (inserted) {
      g.ys.push_back(YNode{std::move(info), {}});
      if (g.ys.size() + g.zs.size() > max_nodes)
        throw CapacityError("game graph exceeded state cap");
    }
    return it->second;
  };

  InfoState root;
  root.current = StateSet::single(a.initial());
  root.canonicalize();
  g.initial = intern_y(root);

  for (std::size_t yi = 0; yi < g.ys.size(); ++yi) {
    const InfoState y_info = g.ys[yi].info;  // copy: ys may grow
    for (EventSet gamma : decisions) {
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

      ZKey key{info_after_decision(a, y_info, gamma, simplify), eff};
      auto [it, inserted] = z_ids.emplace(key, static_cast<int>(g.zs.size()));
      int zi = it->second;
      if (inserted) {
        ZNode z;
        z.info = key.info;
        z.effective = eff;
        z.rep = eff | (a.all_events() & ~executable);
        g.zs.push_back(std::move(z));
        if (g.ys.size() + g.zs.size() > max_nodes)
          throw CapacityError("game graph exceeded state cap");
        // Environment moves: every feasible observation.
        for_each_event(eff & a.observable(), [&](int sigma) {
          InfoState next = info_after_observation(a, g.zs[zi].info, sigma);
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

namespace {

GameGraph restrict_graph(const GameGraph& g, const std::vector<char>& keep_y,
                         const std::vector<char>& keep_z) {
  GameGraph out;
  std::vector<int> ymap(g.ys.size(), -1), zmap(g.zs.size(), -1);
  for (std::size_t i = 0; i < g.ys.size(); ++i)
    if (keep_y[i]) {
      ymap[i] = static_cast<int>(out.ys.size());
      out.ys.push_back(YNode{g.ys[i].info, {}});
    }
  for (std::size_t i = 0; i < g.zs.size(); ++i)
    if (keep_z[i]) {
      zmap[i] = static_cast<int>(out.zs.size());
      ZNode z;
      z.info = g.zs[i].info;
      z.effective = g.zs[i].effective;
      z.rep = g.zs[i].rep;
      out.zs.push_back(std::move(z));
    }
  for (std::size_t i = 0; i < g.ys.size(); ++i) {
    if (!keep_y[i]) continue;
    for (auto& [eff, z] : g.ys[i].succ)
      if (zmap[z] >= 0) out.ys[ymap[i]].succ.push_back({eff, zmap[z]});
  }
  for (std::size_t i = 0; i < g.zs.size(); ++i) {
    if (!keep_z[i]) continue;
    for (auto& [sigma, y] : g.zs[i].succ)
      if (ymap[y] >= 0) out.zs[zmap[i]].succ.push_back({sigma, ymap[y]});
  }
  out.initial = g.initial >= 0 && keep_y[g.initial] ? ymap[g.initial] : -1;
  return out;
}

GameGraph reachable_part(const GameGraph& g) {
  if (g.initial < 0) return GameGraph{};
  std::vector<char> seen_y(g.ys.size(), 0), seen_z(g.zs.size(), 0);
  std::vector<int> stack{g.initial};
  seen_y[g.initial] = 1;
  while (!stack.empty()) {
    int y = stack.back();
    stack.pop_back();
    for (auto& [eff, z] : g.ys[y].succ) {
      if (seen_z[z]) continue;
      seen_z[z] = 1;
      for (auto& [sigma, y2] : g.zs[z].succ)
        if (!seen_y[y2]) {
          seen_y[y2] = 1;
          stack.push_back(y2);
        }
    }
  }
  return restrict_graph(g, seen_y, seen_z);
}

}  // namespace

GameGraph prune_revealing(const GameGraph& g, const Automaton& a) {
  if (g.empty()) return GameGraph{};
  std::vector<char> keep_y(g.ys.size(), 1), keep_z(g.zs.size(), 1);
  for (std::size_t i = 0; i < g.zs.size(); ++i)
    if (is_revealing(g.zs[i].info, a)) keep_z[i] = 0;
  return reachable_part(restrict_graph(g, keep_y, keep_z));
}

FixpointResult consistency_fixpoint(const GameGraph& g) {
  FixpointResult res;
  if (g.empty()) {
    res.graph = GameGraph{};
    return res;
  }
  std::vector<char> alive_y(g.ys.size(), 1), alive_z(g.zs.size(), 1);
  for (;;) {
    std::vector<int> drop_y, drop_z;
    for (std::size_t y = 0; y < g.ys.size(); ++y) {
      if (!alive_y[y]) continue;
      bool has_choice = false;
      for (auto& [eff, z] : g.ys[y].succ)
        if (alive_z[z]) {
          has_choice = true;
          break;
        }
      if (!has_choice) drop_y.push_back(static_cast<int>(y));
    }
    for (std::size_t z = 0; z < g.zs.size(); ++z) {
      if (!alive_z[z]) continue;
      // Every feasible observation must stay defined.
      for (auto& [sigma, y] : g.zs[z].succ)
        if (!alive_y[y]) {
          drop_z.push_back(static_cast<int>(z));
          break;
        }
    }
    if (drop_y.empty() && drop_z.empty()) break;
    for (int y : drop_y) alive_y[y] = 0;
    for (int z : drop_z) alive_z[z] = 0;
    res.removed_per_round.push_back(
        static_cast<int>(drop_y.size() + drop_z.size()));
  }
  res.graph = alive_y[g.initial]
                  ? reachable_part(restrict_graph(g, alive_y, alive_z))
                  : GameGraph{};
  return res;
}

GameGraph solve_safety_game(const Automaton& a, bool simplify,
                            std::size_t max_nodes) {
  GameGraph total = build_total_bts(a, simplify, max_nodes);
  return consistency_fixpoint(prune_revealing(total, a)).graph;
}

std::vector<int> max_decision_edges(const GameGraph& g, const Automaton& a,
                                    int y) {
  const auto& succ = g.ys[y].succ;
  std::vector<int> maximal;
  for (std::size_t i = 0; i < succ.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < succ.size(); ++j) {
      if (i == j) continue;
      EventSet ei = succ[i].first, ej = succ[j].first;
      if (ei != ej && (ei & ej) == ei) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.push_back(static_cast<int>(i));
  }
  // Order by the display form of the representative decision.
  std::sort(maximal.begin(), maximal.end(), [&](int l, int r) {
    return a.event_names_of(g.zs[succ[l].second].rep & a.controllable()) <
           a.event_names_of(g.zs[succ[r].second].rep & a.controllable());
  });
  return maximal;
}

std::vector<EventSet> max_decisions(const GameGraph& g, const Automaton& a,
                                    int y) {
  std::vector<EventSet> out;
  for (int idx : max_decision_edges(g, a, y))
    out.push_back(g.zs[g.ys[y].succ[idx].second].rep);
  return out;
}

}  // namespace opacsyn
