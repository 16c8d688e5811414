#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gyrosim/channel.hpp"

namespace gyrosim {

// Raised for malformed configs and bad user input (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an output file cannot be written (CLI exit code 3).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario {
  kTrajectory,
  kCompareSemiclassical,
  kCoherence,
  kChiNorm,
  kPurityScan,
  kPovmAudit,
  kChannelAudit,
};

const char* to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

const char* to_string(ChannelVariant v);
ChannelVariant variant_from_string(const std::string& name);

// Flat experiment description. Every field can come from the JSON config
// file or be overridden by the CLI flag of the same name; unset fields fall
// back to scenario-specific defaults.
struct ExperimentConfig {
  Scenario scenario = Scenario::kTrajectory;
  int two_ell = 40;
  std::optional<double> sz;               // default depends on the scenario
  std::optional<double> tau;              // default: the special value pi/d
  std::optional<ChannelVariant> variant;  // default depends on the scenario
  std::optional<double> theta0;
  double phi0 = 0.0;
  std::optional<int> n_steps;
  int n_steps_cap = 10000;
  std::string out;  // empty selects a scenario-specific file name
  std::uint64_t seed = 1;
  std::vector<double> theta_grid;
  std::vector<int> two_ell_list;
  bool dump_states = false;
  std::map<std::string, double> tolerances;

  double resolved_sz() const;
  double resolved_tau(const SpinSystem& sys) const;
  ChannelVariant resolved_variant() const;
  double resolved_theta0() const;
  int resolved_n_steps() const;
  std::vector<double> resolved_theta_grid() const;
  std::vector<int> resolved_two_ell_list() const;
  std::string resolved_out() const;
  double tolerance_or(const std::string& name, double fallback) const;

  ChannelConfig channel_config_for(const SpinSystem& sys) const;
  ChannelConfig channel_config() const;

  void validate() const;  // throws ConfigError
};

ExperimentConfig config_from_json_text(const std::string& text);
ExperimentConfig config_from_json_file(const std::string& path);
std::string config_to_json_text(const ExperimentConfig& cfg);

}  // namespace gyrosim
