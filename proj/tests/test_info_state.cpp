#include "doctest.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include "opacsyn/info_state.hpp"
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

TEST_CASE("initial information state under a restricted decision") {
  Automaton a = load("ex_qual.des");
  InfoState s =
      initial_info_state(a, gamma_of(a, {"o1", "o2", "b", "c"}), false);
  CHECK(s.current == named(a, {"0", "4", "5", "7"}));
  REQUIRE(s.history.size() == 1);
  CHECK(s.history[0].size() == 9);
  CHECK(s.history[0].contains(a.state_id("4"), a.state_id("7")));
  CHECK(s.history[0].origins() == s.current);

  // No unobservable events enabled: the state collapses to the initial one.
  Automaton b = parse_automaton(
      "states: 0 1\ninitial: 0\nobservable: o\ntransitions:\n0 o 1\n");
  InfoState init = initial_info_state(b, b.uncontrollable(), false);
  CHECK(init.current == StateSet::single(b.initial()));
  REQUIRE(init.history.size() == 1);
  CHECK(init.history[0].size() == 1);
  CHECK(init.history[0].contains(b.initial(), b.initial()));
}

TEST_CASE("three-step update trace") {
  Automaton a = load("ex_qual.des");
  EventSet full = a.all_events();
  InfoState s =
      initial_info_state(a, gamma_of(a, {"o1", "o2", "b", "c"}), false);

  s = update_info_state(s, a.event_id("o2"), full, a, false);
  CHECK(s.current == named(a, {"6", "8"}));
  REQUIRE(s.history.size() == 2);
  {
    std::vector<StateSet> want{named(a, {"0", "4", "5", "7"}),
                               named(a, {"6", "8"})};
    std::sort(want.begin(), want.end());
    CHECK(d1(s) == want);
  }

  s = update_info_state(s, a.event_id("o1"), full, a, false);
  CHECK(s.current == named(a, {"6"}));
  REQUIRE(s.history.size() == 3);
  auto firsts = d1(s);
  std::vector<StateSet> want{named(a, {"0", "4", "7"}), named(a, {"8"}),
                             named(a, {"6"})};
  std::sort(want.begin(), want.end());
  CHECK(firsts == want);
}

TEST_CASE("simplification drops stationary entries without secrets") {
  Automaton a = load("ex_qual.des");
  // Current estimate {0,1} holds no secret, so nothing enters the history.
  InfoState s = initial_info_state(a, gamma_of(a, {"o1", "o2", "a"}), true);
  CHECK(s.current == named(a, {"0", "1"}));
  CHECK(s.history.empty());
  CHECK(d1(s).empty());
}

TEST_CASE("revelation test") {
  Automaton a = load("ex_qual.des");
  InfoState s;
  s.current = named(a, {"6"});
  PairRelation r1(a.num_states()), r2(a.num_states());
  r1.add(a.state_id("0"), a.state_id("6"));
  r1.add(a.state_id("1"), a.state_id("6"));
  r1.add(a.state_id("2"), a.state_id("6"));
  r2.add(a.state_id("5"), a.state_id("6"));
  s.history = {r1, r2};
  s.canonicalize();
  CHECK(is_revealing(s, a));

  InfoState t;
  t.current = named(a, {"5", "6"});
  PairRelation r3(a.num_states());
  r3.add(a.state_id("5"), a.state_id("5"));
  r3.add(a.state_id("6"), a.state_id("6"));
  t.history = {r3};
  t.canonicalize();
  CHECK(!is_revealing(t, a));  // {5,6} is not inside the secret set

  InfoState empty;
  empty.current = named(a, {"0"});
  CHECK(!is_revealing(empty, a));
}

TEST_CASE("updates are canonical and deterministic") {
  std::mt19937 rng(99);
  PlantShape shape;
  for (int trial = 0; trial < 40; ++trial) {
    Automaton a = random_plant(rng, shape);
    EventSet g = a.admissible(static_cast<EventSet>(rng()) & a.all_events());
    InfoState s = initial_info_state(a, g, false);
    for (int e = 0; e < a.num_events(); ++e) {
      if (!a.is_observable(e)) continue;
      if (observable_reach(a, s.current, e).empty()) continue;
      InfoState once = update_info_state(s, e, g, a, false);
      InfoState twice = update_info_state(s, e, g, a, false);
      CHECK(once == twice);
      CHECK(once.hash() == twice.hash());
      // Permuting the history must not change the canonical result.
      InfoState shuffled = s;
      std::reverse(shuffled.history.begin(), shuffled.history.end());
      shuffled.canonicalize();
      CHECK(update_info_state(shuffled, e, g, a, false) == once);
    }
  }
}

TEST_CASE("simplified and complete updates agree on revelation") {
  std::mt19937 rng(123);
  PlantShape shape;
  for (int trial = 0; trial < 60; ++trial) {
    Automaton a = random_plant(rng, shape);
    EventSet full = a.all_events();
    InfoState plain = initial_info_state(a, full, false);
    InfoState simp = initial_info_state(a, full, true);
    for (int step = 0; step < 4; ++step) {
      CHECK(plain.current == simp.current);
      CHECK(is_revealing(plain, a) == is_revealing(simp, a));
      int chosen = -1;
      for (int e = 0; e < a.num_events() && chosen < 0; ++e)
        if (a.is_observable(e) &&
            !observable_reach(a, plain.current, e).empty())
          chosen = e;
      if (chosen < 0) break;
      plain = update_info_state(plain, chosen, full, a, false);
      simp = update_info_state(simp, chosen, full, a, true);
    }
  }
}

TEST_CASE("empty history stays empty under simplified updates") {
  Automaton a = load("ex_qual.des");
  InfoState s;
  s.current = named(a, {"1", "2"});
  s.canonicalize();
  InfoState next =
      update_info_state(s, a.event_id("o1"), a.all_events(), a, true);
  // New estimate {5} does contain the secret, so an entry appears...
  CHECK(next.current == named(a, {"5"}));
  CHECK(!next.history.empty());
  // ...but from {6,8} (no secret anywhere ahead) nothing ever enters.
  InfoState t;
  t.current = named(a, {"6", "8"});
  t.canonicalize();
  InfoState after =
      update_info_state(t, a.event_id("o1"), a.all_events(), a, true);
  CHECK(after.current == named(a, {"6"}));
  CHECK(after.history.empty());
}

TEST_CASE("debug serialization shape") {
  Automaton a = load("ex_qual.des");
  InfoState s = initial_info_state(a, a.all_events(), false);
  std::string j = info_state_to_json(s, a);
  CHECK(j.find("\"current\"") != std::string::npos);
  CHECK(j.find("\"history\"") != std::string::npos);
}
