#include "doctest.h"

#include <fstream>
#include <random>
#include <sstream>

#include "opacsyn/estimation.hpp"
#include "opacsyn/oracle.hpp"
#include "random_plants.hpp"

using namespace opacsyn;
using opacsyn_tests::PlantShape;
using opacsyn_tests::random_plant;

namespace {

Automaton load(const std::string& name) {
  std::ifstream in(std::string(OPACSYN_DATA_DIR) + "/" + name);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_automaton(buf.str());
}

/// Copy of the plant with every transition on one event removed.
Automaton without_event(const Automaton& a, const std::string& event) {
  int drop = a.event_id(event);
  std::vector<std::string> states, events;
  for (int x = 0; x < a.num_states(); ++x) states.push_back(a.state_name(x));
  for (int e = 0; e < a.num_events(); ++e) events.push_back(a.event_name(e));
  std::vector<int> delta(states.size() * events.size(), kNoState);
  for (int x = 0; x < a.num_states(); ++x)
    for (int e = 0; e < a.num_events(); ++e)
      if (e != drop) delta[x * a.num_events() + e] = a.delta(x, e);
  return Automaton(std::move(states), std::move(events), a.initial(),
                   a.secret(), a.observable(), a.controllable(),
                   std::move(delta));
}

StateSet named(const Automaton& a, std::initializer_list<const char*> xs) {
  StateSet s;
  for (auto* x : xs) s.set(a.state_id(x));
  return s;
}

EventSet gamma_of(const Automaton& a, std::initializer_list<const char*> es) {
  EventSet g = 0;
  for (auto* e : es) g |= event_bit(a.event_id(e));
  return g;
}

}  // namespace

TEST_CASE("reach operators on the nine-state plant") {
  Automaton a = load("ex_qual.des");
  EventSet g = gamma_of(a, {"o1", "o2", "a", "b"});

  CHECK(unobservable_reach(a, named(a, {"1", "5"}), g) ==
        named(a, {"1", "2", "3", "5"}));
  CHECK(observable_reach(a, named(a, {"1", "2", "3", "5"}),
                         a.event_id("o1")) == named(a, {"5", "6"}));
  // No enabled unobservable events: the closure is the identity.
  EventSet none = gamma_of(a, {"o1", "o2"});
  StateSet q = named(a, {"1", "5"});
  CHECK(unobservable_reach(a, q, none) == q);
  CHECK(observable_reach(a, StateSet{}, a.event_id("o1")).empty());
}

TEST_CASE("pair operators preserve origins and drop dead pairs") {
  Automaton a = load("ex_qual.des");
  EventSet g = gamma_of(a, {"o1", "o2", "a", "b"});

  PairRelation rho(a.num_states());
  rho.add(a.state_id("0"), a.state_id("1"));
  rho.add(a.state_id("4"), a.state_id("5"));
  PairRelation ur = pair_unobservable_reach(a, rho, g);
  CHECK(ur.size() == 4);
  CHECK(ur.contains(a.state_id("0"), a.state_id("3")));
  CHECK(ur.origins() == rho.origins());

  PairRelation nx = pair_observable_reach(a, ur, a.event_id("o1"));
  CHECK(nx.size() == 2);
  CHECK(nx.contains(a.state_id("0"), a.state_id("5")));
  CHECK(nx.contains(a.state_id("0"), a.state_id("6")));
  // The (4,5) pair died: state 5 has no o1 transition.
  CHECK(!nx.origins().test(a.state_id("4")));

  CHECK(pair_observable_reach(a, PairRelation(a.num_states()), a.event_id("o1"))
            .empty());
  CHECK(pair_unobservable_reach(a, rho, gamma_of(a, {"o1", "o2"})) == rho);
}

TEST_CASE("stationary pairs marry each state to its closure") {
  Automaton a = load("ex_qual.des");
  EventSet g = gamma_of(a, {"o1", "o2", "a", "b"});
  StateSet q = named(a, {"1", "2", "3", "5"});
  PairRelation stat = stationary_pairs(a, q, g);
  CHECK(stat.size() == 7);
  CHECK(stat.origins() == q);
  CHECK(stat.currents() == unobservable_reach(a, q, g));
  // Identity relation under an empty unobservable decision.
  PairRelation id = stationary_pairs(a, q, gamma_of(a, {"o1", "o2"}));
  CHECK(id.size() == q.count());
}

TEST_CASE("reach operator laws on random plants") {
  std::mt19937 rng(2024);
  PlantShape shape;
  for (int trial = 0; trial < 60; ++trial) {
    Automaton a = random_plant(rng, shape);
    std::uniform_int_distribution<int> any_state(0, a.num_states() - 1);
    StateSet q;
    for (int i = 0; i < 3; ++i) q.set(any_state(rng));
    EventSet g = a.admissible(static_cast<EventSet>(rng()) & a.all_events());

    StateSet ur = unobservable_reach(a, q, g);
    CHECK(q.subset_of(ur));                                // extensive
    CHECK(unobservable_reach(a, ur, g) == ur);             // idempotent
    StateSet bigger = ur | StateSet::single(any_state(rng));
    CHECK(ur.subset_of(unobservable_reach(a, bigger, g)));  // monotone in q
    CHECK(ur.subset_of(unobservable_reach(a, q, a.all_events())));

    // Current components commute with the plain operators.
    PairRelation rho(a.num_states());
    for (int i = 0; i < 3; ++i) rho.add(any_state(rng), any_state(rng));
    CHECK(pair_unobservable_reach(a, rho, g).currents() ==
          unobservable_reach(a, rho.currents(), g));
    for (int e = 0; e < a.num_events(); ++e) {
      if (!a.is_observable(e)) continue;
      CHECK(pair_observable_reach(a, rho, e).currents() ==
            observable_reach(a, rho.currents(), e));
      // Observable reach distributes over union.
      StateSet q2;
      for (int i = 0; i < 2; ++i) q2.set(any_state(rng));
      CHECK(observable_reach(a, q | q2, e) ==
            (observable_reach(a, q, e) | observable_reach(a, q2, e)));
    }
  }
}

TEST_CASE("opacity verdict on the nine-state plant and its repaired variants") {
  Automaton a = load("ex_qual.des");
  OpacityVerdict v = verify_infinite_step_opacity(a);
  REQUIRE(!v.opaque);
  REQUIRE(v.witness.has_value());
  CHECK(a.format_word(v.witness->alpha_prime) == "o1");
  CHECK(a.format_word(v.witness->alpha_beta) == "o1 o2");
  CHECK(v.witness->estimate_at_reveal == named(a, {"5"}));
  CHECK(v.witness->estimate_at_instant == named(a, {"5", "6"}));

  // Cutting either initial branch keeps the secret plausible forever.
  CHECK(verify_infinite_step_opacity(without_event(a, "b")).opaque);
  CHECK(verify_infinite_step_opacity(without_event(a, "a")).opaque);
}

TEST_CASE("plants without secret states are vacuously opaque") {
  Automaton a = parse_automaton(
      "states: 0 1\ninitial: 0\nobservable: o\ntransitions:\n0 o 1\n");
  CHECK(verify_infinite_step_opacity(a).opaque);
}

TEST_CASE("verifier agrees with the bounded estimate oracle") {
  std::mt19937 rng(77);
  PlantShape shape;
  for (int trial = 0; trial < 80; ++trial) {
    Automaton a = random_plant(rng, shape);
    OpacityVerdict v = verify_infinite_step_opacity(a);
    ObsPolicy open = enable_all_policy(a);
    int depth = 6;
    if (v.witness)
      depth = std::max<int>(depth,
                            static_cast<int>(v.witness->alpha_beta.size()));
    bool revealed = false;
    for (auto& alpha : observations(a, open, depth)) {
      for (std::size_t cut = 0; cut <= alpha.size() && !revealed; ++cut) {
        StateSet est = oracle_delayed_estimate(
            a, open, Word(alpha.begin(), alpha.begin() + cut), alpha);
        if (!est.empty() && est.subset_of(a.secret())) revealed = true;
      }
      if (revealed) break;
    }
    CHECK(revealed == !v.opaque);
    if (v.witness) {
      StateSet est = oracle_delayed_estimate(a, open, v.witness->alpha_prime,
                                             v.witness->alpha_beta);
      CHECK(est == v.witness->estimate_at_reveal);
      CHECK(!est.empty());
      CHECK(est.subset_of(a.secret()));
    }
  }
}
