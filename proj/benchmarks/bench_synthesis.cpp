#include <benchmark/benchmark.h>

#include <fstream>
#include <random>
#include <sstream>

#include "opacsyn/abts.hpp"
#include "opacsyn/bts.hpp"
#include "opacsyn/estimation.hpp"
#include "opacsyn/supervisor.hpp"

namespace {

using namespace opacsyn;

Automaton load(const char* name) {
  std::ifstream in(std::string(OPACSYN_DATA_DIR) + "/" + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_automaton(buf.str());
}

/// Scalable family: a secret lane and a shadow lane of the given length,
/// joined by an unobservable controllable switch. The information-state
/// space grows with the lane length, which is what the fixpoints fight.
Automaton lane_plant(int length) {
  std::ostringstream os;
  os << "states:";
  for (int i = 0; i < 2 * length + 2; ++i) os << " s" << i;
  os << "\ninitial: s0\nsecret: s1\nobservable: o1 o2\ncontrollable: u\n";
  os << "transitions:\ns0 u s" << length + 1 << "\n";
  // Secret lane s1..s(length); shadow lane s(length+1)..s(2*length+1).
  os << "s0 o1 s1\n";
  for (int i = 1; i < length; ++i)
    os << "s" << i << (i % 2 ? " o2 s" : " o1 s") << i + 1 << "\n";
  for (int i = length + 1; i < 2 * length + 1; ++i)
    os << "s" << i << (i % 2 ? " o1 s" : " o2 s") << i + 1 << "\n";
  return parse_automaton(os.str());
}

void BM_VerifyOpacity(benchmark::State& state) {
  Automaton a = load("ex_qual.des");
  for (auto _ : state)
    benchmark::DoNotOptimize(verify_infinite_step_opacity(a).opaque);
}
BENCHMARK(BM_VerifyOpacity);

void BM_BuildTotalGame(benchmark::State& state) {
  Automaton a = load("ex_qual.des");
  for (auto _ : state) {
    GameGraph g = build_total_bts(a);
    benchmark::DoNotOptimize(g.zs.size());
  }
}
BENCHMARK(BM_BuildTotalGame);

void BM_SolveSafetyGame(benchmark::State& state) {
  Automaton a = load("ex_qual.des");
  for (auto _ : state) {
    GameGraph g = solve_safety_game(a);
    benchmark::DoNotOptimize(g.empty());
  }
}
BENCHMARK(BM_SolveSafetyGame);

void BM_ExtractSupervisor(benchmark::State& state) {
  Automaton a = load("ex_qual.des");
  GameGraph solved = solve_safety_game(a);
  for (auto _ : state) {
    auto s = extract_supervisor(solved, a, lex_chooser());
    benchmark::DoNotOptimize(s->nodes.size());
  }
}
BENCHMARK(BM_ExtractSupervisor);

void BM_BuildAugmentedGame(benchmark::State& state) {
  Automaton a = load("ex_quant.des");
  CostFunction cf = CostFunction::linear(5);
  for (auto _ : state) {
    AugGameGraph g = build_total_abts(a, cf);
    benchmark::DoNotOptimize(g.zs.size());
  }
}
BENCHMARK(BM_BuildAugmentedGame);

void BM_ValueIteration(benchmark::State& state) {
  Automaton a = load("ex_quant.des");
  CostFunction cf = CostFunction::linear(5);
  AugGameGraph g = build_total_abts(a, cf);
  for (auto _ : state) {
    ValueTable v = value_iteration(g, cf);
    benchmark::DoNotOptimize(v.initial_value);
  }
}
BENCHMARK(BM_ValueIteration);

void BM_LaneSafetyGame(benchmark::State& state) {
  Automaton a = lane_plant(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    GameGraph g = solve_safety_game(a);
    benchmark::DoNotOptimize(g.ys.size());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LaneSafetyGame)->Arg(4)->Arg(8)->Arg(16)->Complexity();

void BM_LaneValueIteration(benchmark::State& state) {
  Automaton a = lane_plant(static_cast<int>(state.range(0)));
  CostFunction cf = CostFunction::linear(4);
  AugGameGraph g = build_total_abts(a, cf);
  for (auto _ : state) {
    ValueTable v = value_iteration(g, cf);
    benchmark::DoNotOptimize(v.initial_value);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_LaneValueIteration)->Arg(4)->Arg(8)->Arg(16)->Complexity();

}  // namespace

BENCHMARK_MAIN();
