#include "opacsyn/aug_info.hpp"

#include <algorithm>

#include "opacsyn/errors.hpp"

namespace opacsyn {

CostFunction CostFunction::linear(int n_max) {
  if (n_max < 1) throw SemanticError("cost horizon must be >= 1");
  std::vector<std::int64_t> t(n_max);
  for (int k = 0; k < n_max; ++k) t[k] = n_max - k;
  return from_table(std::move(t));
}

CostFunction CostFunction::k_step(int K) {
  if (K < 0) throw SemanticError("K must be >= 0");
  return from_table(std::vector<std::int64_t>(K + 1, 1));
}

CostFunction CostFunction::from_table(std::vector<std::int64_t> t) {
  while (!t.empty() && t.back() == 0) t.pop_back();
  if (t.empty()) throw SemanticError("cost table is identically zero");
  for (std::size_t i = 0; i + 1 < t.size(); ++i)
    if (t[i] < t[i + 1]) throw SemanticError("cost table must be non-increasing");
  if (t.front() <= 0) throw SemanticError("cost table must be non-negative");
  CostFunction cf;
  cf.table = std::move(t);
  return cf;
}

void AugInfoState::canonicalize() {
  std::erase_if(history, [](const AgedRelation& e) { return e.rel.empty(); });
  std::sort(history.begin(), history.end(),
            [](const AgedRelation& x, const AgedRelation& y) {
              if (x.age != y.age) return x.age < y.age;
              return x.rel < y.rel;
            });
  history.erase(std::unique(history.begin(), history.end()), history.end());
}

std::vector<AgedRelation> rev_entries(const AugInfoState& s,
                                      const Automaton& a) {
  std::vector<AgedRelation> out;
  for (auto& e : s.history) {
    StateSet o = e.rel.origins();
    if (!o.empty() && o.subset_of(a.secret())) out.push_back(e);
  }
  return out;
}

std::int64_t state_cost(const AugInfoState& s, const CostFunction& cf,
                        const Automaton& a) {
  std::int64_t total = 0;
  for (auto& e : rev_entries(s, a)) total += cf.at(e.age);
  return total;
}

AugInfoState aug_initial(const Automaton& a, EventSet gamma0, bool simplify) {
  AugInfoState s;
  s.current = unobservable_reach(a, StateSet::single(a.initial()), gamma0);
  if (!simplify || s.current.intersects(a.secret()))
    s.history.push_back({stationary_pairs(a, s.current, gamma0), 0});
  s.canonicalize();
  return s;
}

AugInfoState aug_update(const AugInfoState& s, int sigma, EventSet gamma,
                        const Automaton& a, const CostFunction& cf,
                        bool simplify) {
  const StateSet secret = a.secret();
  AugInfoState out;
  out.current =
      unobservable_reach(a, observable_reach(a, s.current, sigma), gamma);
  for (const auto& e : s.history) {
    StateSet o = e.rel.origins();
    if (!o.empty() && o.subset_of(secret)) continue;  // already revealed
    if (e.age + 1 >= cf.window()) continue;           // aged out
    PairRelation next = pair_unobservable_reach(
        a, pair_observable_reach(a, e.rel, sigma), gamma);
    if (!next.empty()) out.history.push_back({std::move(next), e.age + 1});
  }
  if (!simplify || out.current.intersects(secret)) {
    PairRelation stat = stationary_pairs(a, out.current, gamma);
    if (!stat.empty()) out.history.push_back({std::move(stat), 0});
  }
  out.canonicalize();
  return out;
}

}  // namespace opacsyn
