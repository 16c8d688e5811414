#pragma once

#include <string>
#include <vector>

#include "gyrosim/experiment_config.hpp"

namespace gyrosim {

// Outcome of one scenario run. Every produced file is listed in artifacts
// and paired on disk with <path>.manifest.json.
struct ScenarioResult {
  bool audit_passed = true;
  std::vector<std::string> artifacts;
  std::string summary_json;  // summary block echoed into the manifest
};

// Executes cfg end to end: simulate, write CSV/report artifacts, write one
// manifest per artifact. Throws ConfigError / IoError /
// NumericalDegradationError; audit scenarios report failed physics checks
// via audit_passed instead of throwing.
ScenarioResult run_scenario(const ExperimentConfig& cfg);

}  // namespace gyrosim
