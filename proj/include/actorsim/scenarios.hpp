#pragma once

#include "actorsim/constructs.hpp"
#include "actorsim/scheduler.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace actorsim {

using ScenarioParams = std::map<std::string, std::string>;

struct ScenarioInfo {
  std::string name;
  std::string summary;
  /// Runs a Direct Logic script instead of an actor system.
  bool logic = false;
};

const std::vector<ScenarioInfo>& scenario_catalog();
const ScenarioInfo* find_scenario(std::string_view name);

struct UnknownScenario : std::invalid_argument {
  explicit UnknownScenario(const std::string& name);
};

/// Builds the actor system for a non-logic scenario. Parameters:
///   account      balance, first, second
///   channel      puts, gets
///   real         bits
///   same-fringe  first, second   trees such as "(3 (4 5))"
///   lambda       term            e.g. "(\f.\x.f (f x)) succ 0"
/// Throws UnknownScenario, std::invalid_argument for bad parameters.
System make_scenario(const std::string& name, const ScenarioParams& params = {});

/// Script run by a logic scenario.
std::string_view logic_scenario_script(const std::string& name);

/// Tree syntax: an integer leaf or "(left right)".
Tree parse_tree(std::string_view text);
std::string to_string(const Tree& tree);

}  // namespace actorsim
