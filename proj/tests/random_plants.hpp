#pragma once

#include <random>
#include <string>
#include <vector>

#include "opacsyn/automaton.hpp"
#include "opacsyn/oracle.hpp"

namespace opacsyn_tests {

struct PlantShape {
  int max_states = 6;
  int max_events = 4;
  int max_controllable = 2;
  int max_secret = 2;
  bool acyclic = false;
  double density = 0.4;
};

/// Deterministic random plant family used by the property suites.
inline opacsyn::Automaton random_plant(std::mt19937& rng,
                                       const PlantShape& shape) {
  using namespace opacsyn;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  int n = std::uniform_int_distribution<int>(2, shape.max_states)(rng);
  int m = std::uniform_int_distribution<int>(1, shape.max_events)(rng);

  std::vector<std::string> states, events;
  for (int i = 0; i < n; ++i) states.push_back("q" + std::to_string(i));
  for (int i = 0; i < m; ++i) events.push_back("e" + std::to_string(i));

  EventSet observable = 0, controllable = 0;
  int n_ctrl = 0;
  for (int e = 0; e < m; ++e) {
    if (coin(rng) < 0.55) observable |= event_bit(e);
    if (n_ctrl < shape.max_controllable && coin(rng) < 0.45) {
      controllable |= event_bit(e);
      ++n_ctrl;
    }
  }

  std::vector<int> delta(static_cast<std::size_t>(n) * m, kNoState);
  for (int x = 0; x < n; ++x)
    for (int e = 0; e < m; ++e) {
      if (coin(rng) >= shape.density) continue;
      int lo = shape.acyclic ? x + 1 : 0;
      if (lo >= n) continue;
      delta[x * m + e] =
          std::uniform_int_distribution<int>(lo, n - 1)(rng);
    }

  StateSet secret;
  int n_secret = std::uniform_int_distribution<int>(0, shape.max_secret)(rng);
  if (n_secret == 0 && coin(rng) < 0.8) n_secret = 1;  // bias to interesting
  for (int i = 0; i < n_secret; ++i)
    secret.set(std::uniform_int_distribution<int>(0, n - 1)(rng));

  return Automaton(std::move(states), std::move(events), 0, secret,
                   observable, controllable, std::move(delta));
}

/// Random depth-bounded decision-tree supervisor over the plant's
/// closed-loop observations.
inline opacsyn::DecisionTreeSupervisor random_tree_supervisor(
    std::mt19937& rng, const opacsyn::Automaton& a, int depth) {
  using namespace opacsyn;
  std::vector<int> ctrl;
  for_each_event(a.controllable(), [&](int e) { ctrl.push_back(e); });
  auto random_decision = [&]() {
    EventSet g = a.uncontrollable();
    for (int e : ctrl)
      if (std::uniform_int_distribution<int>(0, 1)(rng)) g |= event_bit(e);
    return g;
  };
  DecisionTreeSupervisor t;
  t.depth = depth;
  t.fallback = random_decision();
  // Tabulate decisions for the observation prefixes the partial assignment
  // keeps reachable, in BFS order.
  std::vector<Word> frontier{Word{}};
  while (!frontier.empty()) {
    Word w = frontier.back();
    frontier.pop_back();
    EventSet g = random_decision();
    t.table[w] = g;
    if (static_cast<int>(w.size()) == depth) continue;
    for_each_event(g & a.observable(), [&](int e) {
      Word child = w;
      child.push_back(e);
      frontier.push_back(child);
    });
  }
  return t;
}

}  // namespace opacsyn_tests
