#include "gyrosim/experiment_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace gyrosim {

namespace {

using nlohmann::json;

constexpr const char* kScenarioNames[] = {
    "trajectory",   "compare_semiclassical", "coherence", "chi_norm",
    "purity_scan",  "povm_audit",            "channel_audit"};

constexpr const char* kVariantNames[] = {"unitary", "closed_form", "rotated"};

}  // namespace

const char* to_string(Scenario s) {
  return kScenarioNames[static_cast<int>(s)];
}

Scenario scenario_from_string(const std::string& name) {
  for (int i = 0; i < 7; ++i) {
    if (name == kScenarioNames[i]) return static_cast<Scenario>(i);
  }
  throw ConfigError("unknown scenario '" + name + "'");
}

const char* to_string(ChannelVariant v) {
  return kVariantNames[static_cast<int>(v)];
}

ChannelVariant variant_from_string(const std::string& name) {
  for (int i = 0; i < 3; ++i) {
    if (name == kVariantNames[i]) return static_cast<ChannelVariant>(i);
  }
  throw ConfigError("unknown channel variant '" + name + "'");
}

double ExperimentConfig::resolved_sz() const {
  if (sz.has_value()) return *sz;
  // Unbiased probes keep the dephasing grid free of angle drift, so each
  // coherence row decays at a fixed per-step rate.
  return scenario == Scenario::kCoherence ? 0.0 : 0.5;
}

double ExperimentConfig::resolved_tau(const SpinSystem& sys) const {
  return tau.value_or(ChannelConfig::special_tau(sys));
}

ChannelVariant ExperimentConfig::resolved_variant() const {
  if (variant.has_value()) return *variant;
  switch (scenario) {
    // Dephasing quantities are defined through the measurement-frame form.
    case Scenario::kCoherence:
    case Scenario::kChiNorm:
      return ChannelVariant::kRotatedMeasurement;
    default:
      return ChannelVariant::kUnitary;
  }
}

double ExperimentConfig::resolved_theta0() const {
  if (theta0.has_value()) return *theta0;
  switch (scenario) {
    case Scenario::kChiNorm:
      return kPi / 3.0;
    // Near the inverted pole the polarization deficit grows large enough for
    // the inverse-purity comparison to have a meaningful window.
    case Scenario::kPurityScan:
      return kPi - 0.2;
    default:
      return 2.0 * kPi / 3.0;
  }
}

int ExperimentConfig::resolved_n_steps() const {
  if (n_steps.has_value()) return *n_steps;
  switch (scenario) {
    case Scenario::kCoherence:
      return 60;
    case Scenario::kChiNorm:
      return 20;
    case Scenario::kPurityScan:
      return 200;
    default:
      return 400;
  }
}

std::vector<double> ExperimentConfig::resolved_theta_grid() const {
  if (!theta_grid.empty()) return theta_grid;
  switch (scenario) {
    case Scenario::kCoherence:
      return {kPi / 6.0, kPi / 3.0, kPi / 2.0, 2.0 * kPi / 3.0, kPi};
    // The relaxation flow used to advance the angles is undefined at the
    // inverted pole, so the residual sweep stops short of pi.
    default:
      return {kPi / 6.0, kPi / 3.0, kPi / 2.0, 2.0 * kPi / 3.0};
  }
}

std::vector<int> ExperimentConfig::resolved_two_ell_list() const {
  if (!two_ell_list.empty()) return two_ell_list;
  switch (scenario) {
    case Scenario::kPovmAudit:
    case Scenario::kChannelAudit:
      return {1, 2, 4, 10};
    default:
      return {20, 40, 80};
  }
}

std::string ExperimentConfig::resolved_out() const {
  if (!out.empty()) return out;
  switch (scenario) {
    case Scenario::kTrajectory:
      return "trajectory.csv";
    case Scenario::kCompareSemiclassical:
      return "compare_semiclassical.csv";
    case Scenario::kCoherence:
      return "coherence.csv";
    case Scenario::kChiNorm:
      return "chi_norm.csv";
    case Scenario::kPurityScan:
      return "purity_scan.csv";
    case Scenario::kPovmAudit:
      return "povm_audit.json";
    case Scenario::kChannelAudit:
      return "channel_audit.json";
  }
  return "out.csv";
}

double ExperimentConfig::tolerance_or(const std::string& name,
                                      double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

ChannelConfig ExperimentConfig::channel_config_for(
    const SpinSystem& sys) const {
  ChannelConfig cfg{sys, resolved_sz(), resolved_tau(sys), resolved_variant()};
  cfg.validate();
  return cfg;
}

ChannelConfig ExperimentConfig::channel_config() const {
  return channel_config_for(SpinSystem(two_ell));
}

void ExperimentConfig::validate() const {
  try {
    SpinSystem sys(two_ell);
    channel_config_for(sys);
    for (const int twol : resolved_two_ell_list()) {
      channel_config_for(SpinSystem(twol));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const int steps = resolved_n_steps();
  if (steps < 0) {
    throw ConfigError("n_steps must be non-negative");
  }
  if (steps > n_steps_cap) {
    throw ConfigError("n_steps exceeds n_steps_cap (" +
                      std::to_string(n_steps_cap) + ")");
  }
  const double th0 = resolved_theta0();
  if (!(th0 >= 0.0 && th0 <= kPi)) {
    throw ConfigError("theta0 must lie in [0, pi]");
  }
  for (const double th : resolved_theta_grid()) {
    if (!(th >= 0.0 && th <= kPi)) {
      throw ConfigError("theta_grid entries must lie in [0, pi]");
    }
  }
}

namespace {

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  try {
    if (j.contains("scenario")) {
      cfg.scenario = scenario_from_string(j.at("scenario").get<std::string>());
    }
    if (j.contains("two_ell")) {
      cfg.two_ell = j.at("two_ell").get<int>();
    } else if (j.contains("ell")) {
      cfg.two_ell = SpinSystem::from_ell(j.at("ell").get<double>()).two_ell();
    }
    if (j.contains("sz")) cfg.sz = j.at("sz").get<double>();
    if (j.contains("tau") && !j.at("tau").is_null()) {
      cfg.tau = j.at("tau").get<double>();
    }
    if (j.contains("variant") && !j.at("variant").is_null()) {
      cfg.variant = variant_from_string(j.at("variant").get<std::string>());
    }
    if (j.contains("theta0") && !j.at("theta0").is_null()) {
      cfg.theta0 = j.at("theta0").get<double>();
    }
    if (j.contains("phi0")) cfg.phi0 = j.at("phi0").get<double>();
    if (j.contains("n_steps") && !j.at("n_steps").is_null()) {
      cfg.n_steps = j.at("n_steps").get<int>();
    }
    if (j.contains("n_steps_cap")) {
      cfg.n_steps_cap = j.at("n_steps_cap").get<int>();
    }
    if (j.contains("out")) cfg.out = j.at("out").get<std::string>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("theta_grid")) {
      cfg.theta_grid = j.at("theta_grid").get<std::vector<double>>();
    }
    if (j.contains("ell_list")) {
      for (const double ell : j.at("ell_list").get<std::vector<double>>()) {
        cfg.two_ell_list.push_back(SpinSystem::from_ell(ell).two_ell());
      }
    } else if (j.contains("two_ell_list")) {
      cfg.two_ell_list = j.at("two_ell_list").get<std::vector<int>>();
    }
    if (j.contains("dump_states")) {
      cfg.dump_states = j.at("dump_states").get<bool>();
    }
    if (j.contains("tolerances")) {
      cfg.tolerances =
          j.at("tolerances").get<std::map<std::string, double>>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

ExperimentConfig config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

std::string config_to_json_text(const ExperimentConfig& cfg) {
  json j;
  j["scenario"] = to_string(cfg.scenario);
  j["two_ell"] = cfg.two_ell;
  j["ell"] = 0.5 * cfg.two_ell;
  j["sz"] = cfg.resolved_sz();
  j["tau"] = cfg.resolved_tau(SpinSystem(cfg.two_ell));
  j["variant"] = to_string(cfg.resolved_variant());
  j["theta0"] = cfg.resolved_theta0();
  j["phi0"] = cfg.phi0;
  j["n_steps"] = cfg.resolved_n_steps();
  j["n_steps_cap"] = cfg.n_steps_cap;
  j["out"] = cfg.resolved_out();
  j["seed"] = cfg.seed;
  j["theta_grid"] = cfg.resolved_theta_grid();
  json ells = json::array();
  for (const int twol : cfg.resolved_two_ell_list()) {
    ells.push_back(0.5 * twol);
  }
  j["ell_list"] = ells;
  j["dump_states"] = cfg.dump_states;
  j["tolerances"] = cfg.tolerances;
  return j.dump(2);
}

}  // namespace gyrosim
