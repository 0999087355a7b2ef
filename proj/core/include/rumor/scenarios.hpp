#pragma once

#include <string>
#include <vector>

#include "rumor/experiment.hpp"

// Named experiment presets, each bundling parameter choices with the
// assertions that make its claim checkable.  A preset may run several
// sub-experiments (an n-sweep, a treatment/control pair); key=value
// overrides are applied to every one of them, so e.g. trials=10 shrinks a
// whole sweep.

namespace rumor {

struct ScenarioReport {
  std::string name;
  std::vector<ExperimentResult> runs;
  std::vector<std::string> run_labels;  // parallel to runs
  std::vector<AssertionResult> assertions;

  bool passed() const {
    for (const AssertionResult& a : assertions)
      if (!a.passed) return false;
    return true;
  }
};

const std::vector<std::string>& scenario_names();
bool is_scenario(const std::string& name);

ScenarioReport run_scenario(const std::string& name, const KvPairs& overrides,
                            unsigned workers = 0);

}  // namespace rumor
