#pragma once

#include <string>
#include <vector>

#include "opacsyn/automaton.hpp"

namespace opacsyn {

/// Result of replaying a fixture's recorded computations. The constraint
/// file is the single source of truth for a reconstructed plant: tests that
/// depend on the fixture are gated on an empty violation list.
struct FixtureReport {
  std::string name;
  int checks = 0;
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Loads a constraint file ({"automaton": relative path, "checks": [...]})
/// and replays every record against the library and the oracle.
FixtureReport check_fixture(const std::string& constraints_path);

/// Same, with the constraint document already in memory.
FixtureReport check_fixture_text(const std::string& name,
                                 const Automaton& plant,
                                 const std::string& constraints_json);

}  // namespace opacsyn
