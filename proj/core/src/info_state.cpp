#include "opacsyn/info_state.hpp"

#include <algorithm>
#include <sstream>

namespace opacsyn {

void InfoState::canonicalize() {
  std::erase_if(history, [](const PairRelation& r) { return r.empty(); });
  std::sort(history.begin(), history.end());
  history.erase(std::unique(history.begin(), history.end()), history.end());
}

InfoState initial_info_state(const Automaton& a, EventSet gamma0,
                             bool simplify) {
  InfoState s;
  s.current = unobservable_reach(a, StateSet::single(a.initial()), gamma0);
  if (!simplify || s.current.intersects(a.secret()))
    s.history.push_back(stationary_pairs(a, s.current, gamma0));
  s.canonicalize();
  return s;
}

InfoState update_info_state(const InfoState& s, int sigma, EventSet gamma,
                            const Automaton& a, bool simplify) {
  InfoState out;
  out.current =
      unobservable_reach(a, observable_reach(a, s.current, sigma), gamma);
  out.history.reserve(s.history.size() + 1);
  for (const auto& rho : s.history) {
    PairRelation next =
        pair_unobservable_reach(a, pair_observable_reach(a, rho, sigma), gamma);
    if (!next.empty()) out.history.push_back(std::move(next));
  }
  if (!simplify || out.current.intersects(a.secret())) {
    PairRelation stat = stationary_pairs(a, out.current, gamma);
    if (!stat.empty()) out.history.push_back(std::move(stat));
  }
  out.canonicalize();
  return out;
}

std::vector<StateSet> d1(const InfoState& s) {
  std::vector<StateSet> out;
  out.reserve(s.history.size());
  for (auto& rho : s.history) out.push_back(rho.origins());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_revealing(const InfoState& s, const Automaton& a) {
  for (auto& rho : s.history) {
    StateSet o = rho.origins();
    if (!o.empty() && o.subset_of(a.secret())) return true;
  }
  return false;
}

std::string info_state_to_json(const InfoState& s, const Automaton& a) {
  std::ostringstream os;
  os << "{\"current\":[";
  bool first = true;
  s.current.for_each([&](int x) {
    if (!first) os << ',';
    first = false;
    os << '"' << a.state_name(x) << '"';
  });
  os << "],\"history\":[";
  for (std::size_t i = 0; i < s.history.size(); ++i) {
    if (i) os << ',';
    os << '[';
    bool fp = true;
    for (std::size_t o = 0; o < s.history[i].rows.size(); ++o) {
      s.history[i].rows[o].for_each([&](int c) {
        if (!fp) os << ',';
        fp = false;
        os << "[\"" << a.state_name(static_cast<int>(o)) << "\",\""
           << a.state_name(c) << "\"]";
      });
    }
    os << ']';
  }
  os << "]}";
  return os.str();
}

}  // namespace opacsyn
