#include "opacsyn/estimation.hpp"

#include <deque>
#include <unordered_map>

#include "opacsyn/info_state.hpp"
#include "opacsyn/oracle.hpp"

namespace opacsyn {

StateSet unobservable_reach(const Automaton& a, StateSet q, EventSet gamma) {
  EventSet enabled = a.admissible(gamma) & a.unobservable();
  StateSet reach = q;
  StateSet frontier = q;
  while (!frontier.empty()) {
    StateSet next;
    frontier.for_each([&](int x) {
      for_each_event(enabled, [&](int e) {
        int y = a.delta(x, e);
        if (y != kNoState && !reach.test(y)) {
          reach.set(y);
          next.set(y);
        }
      });
    });
    frontier = next;
  }
  return reach;
}

StateSet observable_reach(const Automaton& a, StateSet q, int sigma) {
  StateSet out;
  q.for_each([&](int x) {
    int y = a.delta(x, sigma);
    if (y != kNoState) out.set(y);
  });
  return out;
}

PairRelation pair_unobservable_reach(const Automaton& a,
                                     const PairRelation& rho, EventSet gamma) {
  PairRelation out(a.num_states());
  for (std::size_t i = 0; i < rho.rows.size(); ++i)
    if (!rho.rows[i].empty())
      out.rows[i] = unobservable_reach(a, rho.rows[i], gamma);
  return out;
}

PairRelation pair_observable_reach(const Automaton& a, const PairRelation& rho,
                                   int sigma) {
  PairRelation out(a.num_states());
  for (std::size_t i = 0; i < rho.rows.size(); ++i)
    if (!rho.rows[i].empty())
      out.rows[i] = observable_reach(a, rho.rows[i], sigma);
  return out;
}

PairRelation stationary_pairs(const Automaton& a, StateSet q, EventSet gamma) {
  PairRelation out(a.num_states());
  q.for_each([&](int x) {
    out.rows[x] = unobservable_reach(a, StateSet::single(x), gamma);
  });
  return out;
}

OpacityVerdict verify_infinite_step_opacity(const Automaton& a,
                                            std::size_t max_nodes) {
  const EventSet full = a.all_events();
  struct Node {
    InfoState info;
    int parent;
    int via_event;
  };
  std::vector<Node> nodes;
  std::unordered_map<InfoState, int, InfoStateHash> seen;

  auto reconstruct = [&](int idx) {
    Word alpha;
    for (int i = idx; nodes[i].parent >= 0; i = nodes[i].parent)
      alpha.push_back(nodes[i].via_event);
    std::reverse(alpha.begin(), alpha.end());
    return alpha;
  };
  auto make_witness = [&](int idx) {
    Word alpha = reconstruct(idx);
    // Locate the revealed instant by scanning prefixes with the open-loop
    // delayed-estimate oracle.
    for (std::size_t cut = 0; cut <= alpha.size(); ++cut) {
      Word prefix(alpha.begin(), alpha.begin() + cut);
      StateSet est = oracle_delayed_estimate(a, enable_all_policy(a), prefix,
                                             alpha);
      if (!est.empty() && est.subset_of(a.secret())) {
        OpacityWitness w;
        w.alpha_prime = prefix;
        w.alpha_beta = alpha;
        w.estimate_at_reveal = est;
        w.estimate_at_instant =
            oracle_delayed_estimate(a, enable_all_policy(a), prefix, prefix);
        return w;
      }
    }
    // Unreachable: the information state flagged a revealed instant.
    throw SemanticError("witness reconstruction failed");
  };

  InfoState root = initial_info_state(a, full, /*simplify=*/true);
  nodes.push_back({root, -1, -1});
  seen.emplace(root, 0);
  if (is_revealing(root, a))
    return {false, make_witness(0)};

  for (std::size_t head = 0; head < nodes.size(); ++head) {
    InfoState cur = nodes[head].info;  // copy: nodes may reallocate
    for (int e = 0; e < a.num_events(); ++e) {
      if (!a.is_observable(e)) continue;
      if (observable_reach(a, cur.current, e).empty()) continue;
      InfoState next = update_info_state(cur, e, full, a, /*simplify=*/true);
      auto [it, inserted] = seen.emplace(next, static_cast<int>(nodes.size()));
      if (!inserted) continue;
      nodes.push_back({std::move(next), static_cast<int>(head), e});
      if (nodes.size() > max_nodes)
        throw CapacityError("opacity verification exceeded node cap");
      if (is_revealing(nodes.back().info, a))
        return {false, make_witness(static_cast<int>(nodes.size()) - 1)};
    }
  }
  return {true, std::nullopt};
}

}  // namespace opacsyn
