#include "opacsyn/oracle.hpp"

#include <algorithm>
#include <deque>

#include "opacsyn/estimation.hpp"

namespace opacsyn {

namespace {

/// Closure under enabled unobservable events, written against the raw
/// transition table on purpose (this module must not share code paths with
/// the estimation operators it is used to check).
StateSet raw_closure(const Automaton& a, StateSet q, EventSet gamma) {
  StateSet reach = q;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int x = 0; x < a.num_states(); ++x) {
      if (!reach.test(x)) continue;
      for (int e = 0; e < a.num_events(); ++e) {
        if (a.is_observable(e) || !(gamma & event_bit(e))) continue;
        int y = a.delta(x, e);
        if (y != kNoState && !reach.test(y)) {
          reach.set(y);
          grew = true;
        }
      }
    }
  }
  return reach;
}

StateSet raw_step(const Automaton& a, StateSet q, int sigma) {
  StateSet out;
  q.for_each([&](int x) {
    int y = a.delta(x, sigma);
    if (y != kNoState) out.set(y);
  });
  return out;
}

/// Forward level sets of the runs consistent with alpha: level i holds the
/// states reachable by strings whose projection is alpha[0..i).
std::vector<StateSet> forward_levels(const Automaton& a, const ObsPolicy& s,
                                     const Word& alpha) {
  std::vector<StateSet> fwd(alpha.size() + 1);
  Word prefix;
  fwd[0] = raw_closure(a, StateSet::single(a.initial()), s(prefix));
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    EventSet gamma = s(prefix);
    StateSet next;
    if (gamma & event_bit(alpha[i])) next = raw_step(a, fwd[i], alpha[i]);
    prefix.push_back(alpha[i]);
    fwd[i + 1] = raw_closure(a, next, s(prefix));
  }
  return fwd;
}

}  // namespace

ObsPolicy enable_all_policy(const Automaton& a) {
  EventSet all = a.all_events();
  return [all](const Word&) { return all; };
}

ObsPolicy constant_policy(const Automaton& a, EventSet enabled) {
  EventSet g = a.admissible(enabled);
  return [g](const Word&) { return g; };
}

ObsPolicy policy_of(const Automaton& a, const Supervisor& s) {
  (void)a;
  return [s](const Word& w) { return s.decision(w); };
}

Supervisor DecisionTreeSupervisor::to_supervisor(const Automaton& a) const {
  Supervisor s;
  std::map<Word, int> ids;
  std::deque<Word> frontier;
  auto intern = [&](const Word& w) {
    auto [it, inserted] = ids.emplace(w, static_cast<int>(s.nodes.size()));
    if (inserted) {
      Supervisor::Node n;
      n.decision = a.admissible(decision(w));
      s.nodes.push_back(std::move(n));
      frontier.push_back(w);
    }
    return it->second;
  };
  s.initial = intern({});
  int sink = -1;
  while (!frontier.empty()) {
    Word w = frontier.front();
    frontier.pop_front();
    int m = ids.at(w);
    for_each_event(s.nodes[m].decision & a.observable(), [&](int e) {
      if (static_cast<int>(w.size()) < depth) {
        Word child = w;
        child.push_back(e);
        s.nodes[m].next[e] = intern(child);
      } else {
        if (sink < 0) {
          Supervisor::Node n;
          n.decision = a.admissible(fallback);
          sink = static_cast<int>(s.nodes.size());
          s.nodes.push_back(std::move(n));
          for_each_event(s.nodes[sink].decision & a.observable(),
                         [&](int e2) { s.nodes[sink].next[e2] = sink; });
        }
        s.nodes[m].next[e] = sink;
      }
    });
  }
  return s;
}

std::vector<Word> observations(const Automaton& a, const ObsPolicy& s,
                               int max_len, std::size_t cap) {
  std::vector<Word> out;
  std::deque<std::pair<Word, StateSet>> frontier;
  Word empty;
  frontier.push_back({empty, raw_closure(a, StateSet::single(a.initial()),
                                         s(empty))});
  while (!frontier.empty()) {
    auto [alpha, states] = std::move(frontier.front());
    frontier.pop_front();
    out.push_back(alpha);
    if (out.size() > cap) throw CapacityError("observation enumeration cap");
    if (static_cast<int>(alpha.size()) == max_len) continue;
    EventSet gamma = s(alpha);
    for (int e = 0; e < a.num_events(); ++e) {
      if (!a.is_observable(e) || !(gamma & event_bit(e))) continue;
      StateSet next = raw_step(a, states, e);
      if (next.empty()) continue;
      Word beta = alpha;
      beta.push_back(e);
      StateSet closed = raw_closure(a, next, s(beta));
      frontier.push_back({std::move(beta), closed});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

StateSet oracle_delayed_estimate(const Automaton& a, const ObsPolicy& s,
                                 const Word& alpha_prime, const Word& alpha) {
  if (alpha_prime.size() > alpha.size() ||
      !std::equal(alpha_prime.begin(), alpha_prime.end(), alpha.begin()))
    throw SemanticError("alpha_prime must be a prefix of alpha");
  std::vector<StateSet> fwd = forward_levels(a, s, alpha);

  // Backward pass: states at each level from which the remaining suffix of
  // alpha can still be produced.
  std::vector<StateSet> alive(alpha.size() + 1);
  alive[alpha.size()] = fwd[alpha.size()];
  Word prefix = alpha;
  for (int i = static_cast<int>(alpha.size()) - 1; i >= 0; --i) {
    prefix.pop_back();
    EventSet gamma = s(prefix);
    StateSet target;
    if (gamma & event_bit(alpha[i])) {
      fwd[i].for_each([&](int x) {
        int y = a.delta(x, alpha[i]);
        if (y != kNoState && alive[i + 1].test(y)) target.set(x);
      });
    }
    // Reverse closure through enabled unobservable moves inside the level.
    StateSet r = target;
    bool grew = true;
    while (grew) {
      grew = false;
      fwd[i].for_each([&](int x) {
        if (r.test(x)) return;
        for (int e = 0; e < a.num_events(); ++e) {
          if (a.is_observable(e) || !(gamma & event_bit(e))) continue;
          int y = a.delta(x, e);
          if (y != kNoState && r.test(y)) {
            r.set(x);
            grew = true;
            return;
          }
        }
      });
    }
    alive[i] = r;
  }
  return alive[alpha_prime.size()];
}

PairRelation oracle_pair_relation(const Automaton& a, const ObsPolicy& s,
                                  const Word& alpha_prime, const Word& alpha) {
  StateSet instants = oracle_delayed_estimate(a, s, alpha_prime, alpha);
  PairRelation rel(a.num_states());
  // For each instant state, replay the suffix levels from that state alone.
  instants.for_each([&](int x0) {
    std::vector<StateSet> fwd(alpha.size() + 1);
    Word prefix = alpha_prime;
    fwd[alpha_prime.size()] =
        raw_closure(a, StateSet::single(x0), s(prefix));
    for (std::size_t i = alpha_prime.size(); i < alpha.size(); ++i) {
      EventSet gamma = s(prefix);
      StateSet next;
      if (gamma & event_bit(alpha[i])) next = raw_step(a, fwd[i], alpha[i]);
      prefix.push_back(alpha[i]);
      fwd[i + 1] = raw_closure(a, next, s(prefix));
    }
    rel.rows[x0] = fwd[alpha.size()];
  });
  return rel;
}

StateSet oracle_delayed_estimate_enum(const Automaton& a, const ObsPolicy& s,
                                      const Word& alpha_prime,
                                      const Word& alpha, std::size_t cap) {
  if (alpha_prime.size() > alpha.size() ||
      !std::equal(alpha_prime.begin(), alpha_prime.end(), alpha.begin()))
    throw SemanticError("alpha_prime must be a prefix of alpha");
  const std::size_t bound = (alpha.size() + 1) * a.num_states();
  std::size_t visited = 0;

  // Enumerates strings from (x, |proj|) consistent with alpha, within the
  // remaining length budget; returns every (state, budget-left) pair at
  // which the projection first has target_len observable events.
  auto enumerate = [&](int x0, std::size_t obs0, std::size_t budget,
                       std::size_t target_len) {
    std::vector<std::pair<int, std::size_t>> hits;
    std::deque<std::tuple<int, std::size_t, std::size_t>> work;
    work.push_back({x0, obs0, budget});
    while (!work.empty()) {
      auto [x, obs, left] = work.front();
      work.pop_front();
      if (++visited > cap)
        throw CapacityError("string enumeration exceeded cap");
      if (obs == target_len) hits.push_back({x, left});
      if (left == 0) continue;
      Word proj(alpha.begin(), alpha.begin() + obs);
      EventSet gamma = s(proj);
      for (int e = 0; e < a.num_events(); ++e) {
        if (!(gamma & event_bit(e))) continue;
        int y = a.delta(x, e);
        if (y == kNoState) continue;
        if (a.is_observable(e)) {
          if (obs == alpha.size() || alpha[obs] != e) continue;
          work.push_back({y, obs + 1, left - 1});
        } else {
          work.push_back({y, obs, left - 1});
        }
      }
    }
    return hits;
  };

  // Strings s with P(s) = alpha_prime, then continuations t with
  // P(t) = the remaining suffix of alpha, sharing the |st| budget.
  StateSet instants;
  for (auto& [x, left] : enumerate(a.initial(), 0, bound,
                                   alpha_prime.size())) {
    if (instants.test(x)) continue;
    if (!enumerate(x, alpha_prime.size(), left, alpha.size()).empty())
      instants.set(x);
  }
  return instants;
}

std::vector<Word> oracle_rev_set(const Automaton& a, const ObsPolicy& s,
                                 const Word& alpha_prime, const Word& alpha) {
  std::vector<Word> out;
  for (std::size_t len = alpha_prime.size(); len <= alpha.size(); ++len) {
    Word beta(alpha.begin(), alpha.begin() + len);
    StateSet est = oracle_delayed_estimate(a, s, alpha_prime, beta);
    if (!est.empty() && est.subset_of(a.secret())) out.push_back(beta);
  }
  return out;
}

std::int64_t run_cost(const Automaton& a, const ObsPolicy& s,
                      const CostFunction& cf, const Word& alpha) {
  // The observation must be generated by the closed loop.
  if (oracle_delayed_estimate(a, s, alpha, alpha).empty())
    throw SemanticError("observation not generated by the closed loop");
  std::int64_t total = 0;
  for (std::size_t len = 0; len <= alpha.size(); ++len) {
    Word prefix(alpha.begin(), alpha.begin() + len);
    std::vector<Word> rev = oracle_rev_set(a, s, prefix, alpha);
    if (rev.empty()) continue;
    std::int64_t best = 0;
    for (auto& beta : rev)
      best = std::max(best,
                      cf.at(static_cast<int>(beta.size() - prefix.size())));
    total += best;
  }
  return total;
}

std::int64_t worst_case_cost(const Automaton& a, const ObsPolicy& s,
                             const CostFunction& cf, int horizon) {
  std::int64_t worst = 0;
  for (auto& alpha : observations(a, s, horizon))
    worst = std::max(worst, run_cost(a, s, cf, alpha));
  return worst;
}

std::optional<int> acyclic_observation_horizon(const Automaton& a) {
  // Longest-path DP over a topological order; nullopt on any cycle.
  const int n = a.num_states();
  std::vector<int> indeg(n, 0);
  for (int x = 0; x < n; ++x)
    for (int e = 0; e < a.num_events(); ++e)
      if (a.delta(x, e) != kNoState) ++indeg[a.delta(x, e)];
  std::deque<int> q;
  for (int x = 0; x < n; ++x)
    if (indeg[x] == 0) q.push_back(x);
  std::vector<int> order;
  std::vector<int> indeg2 = indeg;
  while (!q.empty()) {
    int x = q.front();
    q.pop_front();
    order.push_back(x);
    for (int e = 0; e < a.num_events(); ++e) {
      int y = a.delta(x, e);
      if (y != kNoState && --indeg2[y] == 0) q.push_back(y);
    }
  }
  if (static_cast<int>(order.size()) != n) return std::nullopt;
  std::vector<int> obs_len(n, 0);
  int best = 0;
  for (int x : order) {
    for (int e = 0; e < a.num_events(); ++e) {
      int y = a.delta(x, e);
      if (y == kNoState) continue;
      int len = obs_len[x] + (a.is_observable(e) ? 1 : 0);
      obs_len[y] = std::max(obs_len[y], len);
      best = std::max(best, obs_len[y]);
    }
  }
  return best;
}

namespace {

struct TreeSearch {
  const Automaton& a;
  const SearchCaps& caps;
  int depth;
  /// Qualitative mode: cut a branch as soon as some delayed estimate at an
  /// assigned node is already revealed (estimates up to a node depend only on
  /// the decisions along it, so no completion can recover).
  bool prune_revelations = false;
  std::size_t assignments = 0;
  std::vector<EventSet> masks;  // admissible decisions, ascending

  explicit TreeSearch(const Automaton& a_, const SearchCaps& caps_, int depth_)
      : a(a_), caps(caps_), depth(depth_) {
    std::vector<int> ctrl;
    for_each_event(a.controllable(), [&](int e) { ctrl.push_back(e); });
    if (static_cast<int>(ctrl.size()) > caps.max_controllable)
      throw CapacityError("too many controllable events for exhaustive search");
    if (depth > caps.max_depth)
      throw CapacityError("depth exceeds exhaustive search cap");
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << ctrl.size()); ++m) {
      EventSet g = a.uncontrollable();
      for (std::size_t i = 0; i < ctrl.size(); ++i)
        if (m & (std::uint64_t{1} << i)) g |= event_bit(ctrl[i]);
      masks.push_back(g);
    }
  }

  /// Distinct candidate decisions at a node, collapsed by their effect on
  /// the node's run set (equal effective parts act identically).
  std::vector<EventSet> candidates(const StateSet& incoming) const {
    std::vector<EventSet> out;
    std::vector<EventSet> effs;
    for (EventSet g : masks) {
      StateSet closure = raw_closure(a, incoming, g);
      EventSet eff = g & executable_events(a, closure);
      if (std::find(effs.begin(), effs.end(), eff) == effs.end()) {
        effs.push_back(eff);
        out.push_back(g);
      }
    }
    return out;
  }

  /// Enumerates complete assignments; stops early when visit returns true.
  /// `pending` holds (observation, pre-closure state set) nodes awaiting a
  /// decision; `needs_fallback` records whether some run leaves the tree.
  bool search(std::map<Word, EventSet>& table,
              std::vector<std::pair<Word, StateSet>> pending,
              bool needs_fallback,
              const std::function<bool(const DecisionTreeSupervisor&)>& visit) {
    while (!pending.empty() && table.count(pending.back().first))
      pending.pop_back();
    if (pending.empty()) {
      std::vector<EventSet> fb =
          needs_fallback ? masks : std::vector<EventSet>{a.uncontrollable()};
      for (EventSet f : fb) {
        if (++assignments > caps.max_assignments)
          throw CapacityError("exhaustive search exceeded assignment cap");
        DecisionTreeSupervisor t;
        t.depth = depth;
        t.table = table;
        t.fallback = f;
        if (visit(t)) return true;
      }
      return false;
    }
    auto [word, incoming] = pending.back();
    pending.pop_back();
    for (EventSet g : candidates(incoming)) {
      table[word] = g;
      if (prune_revelations) {
        ObsPolicy partial = [&table, this](const Word& w) {
          auto it = table.find(w);
          return it != table.end() ? it->second : a.uncontrollable();
        };
        bool revealed = false;
        for (std::size_t cut = 0; cut <= word.size() && !revealed; ++cut) {
          StateSet est = oracle_delayed_estimate(
              a, partial, Word(word.begin(), word.begin() + cut), word);
          revealed = !est.empty() && est.subset_of(a.secret());
        }
        if (revealed) {
          table.erase(word);
          continue;
        }
      }
      StateSet closure = raw_closure(a, incoming, g);
      auto next_pending = pending;
      bool next_fallback = needs_fallback;
      for (int e = 0; e < a.num_events(); ++e) {
        if (!a.is_observable(e) || !(g & event_bit(e))) continue;
        StateSet step = raw_step(a, closure, e);
        if (step.empty()) continue;
        Word child = word;
        child.push_back(e);
        if (static_cast<int>(child.size()) <= depth)
          next_pending.push_back({child, step});
        else
          next_fallback = true;
      }
      if (search(table, std::move(next_pending), next_fallback, visit))
        return true;
      table.erase(word);
    }
    return false;
  }

  bool run(const std::function<bool(const DecisionTreeSupervisor&)>& visit) {
    std::map<Word, EventSet> table;
    return search(table, {{Word{}, StateSet::single(a.initial())}}, false,
                  visit);
  }
};

}  // namespace

bool exhaustive_qualitative_search(const Automaton& a, int depth,
                                   const SearchCaps& caps) {
  TreeSearch ts(a, caps, depth);
  ts.prune_revelations = true;
  return ts.run([&](const DecisionTreeSupervisor& t) {
    Supervisor s = t.to_supervisor(a);
    return verify_infinite_step_opacity(compose(a, s)).opaque;
  });
}

std::int64_t exhaustive_min_cost(const Automaton& a, const CostFunction& cf,
                                 int horizon, const SearchCaps& caps) {
  TreeSearch ts(a, caps, horizon);
  std::int64_t best = kInfiniteValue;
  ts.run([&](const DecisionTreeSupervisor& t) {
    std::int64_t c = worst_case_cost(a, t.policy(), cf, horizon);
    best = std::min(best, c);
    return false;
  });
  return best;
}

}  // namespace opacsyn
