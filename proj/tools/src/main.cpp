// Command-line runner: one subcommand per scenario, flags mirror the JSON
// config fields, precedence defaults < config file < flags.
//
// Exit codes: 0 success, 1 usage/config error, 2 physics or audit failure,
// 3 I/O failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gyrosim/density_matrix.hpp"
#include "gyrosim/experiment_config.hpp"
#include "gyrosim/scenarios.hpp"
#include "gyrosim/spin_system.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPhysics = 2;
constexpr int kExitIo = 3;

struct FlagValues {
  std::string config_path;
  double ell = 0.0;
  double sz = 0.0;
  double tau = 0.0;
  std::string variant;
  double theta0 = 0.0;
  double phi0 = 0.0;
  int n_steps = 0;
  int n_steps_cap = 0;
  std::string out;
  std::uint64_t seed = 0;
  std::vector<double> theta_grid;
  std::vector<double> ell_list;
  bool dump_states = false;
};

void add_common_options(CLI::App* cmd, FlagValues* v) {
  cmd->add_option("--config", v->config_path,
                  "JSON config file; flags override its fields");
  cmd->add_option("--ell", v->ell, "gyroscope spin (half-integer)");
  cmd->add_option("--sz", v->sz, "probe polarization <S_z>, in [-1/2, 1/2]");
  cmd->add_option("--tau", v->tau,
                  "interaction time (default: pi/d, the measurement value)");
  cmd->add_option("--variant", v->variant,
                  "channel route: unitary | closed_form | rotated");
  cmd->add_option("--theta0", v->theta0, "initial polar angle (radians)");
  cmd->add_option("--phi0", v->phi0,
                  "second coherent-state angle for superpositions (radians)");
  cmd->add_option("--n_steps", v->n_steps, "number of interactions");
  cmd->add_option("--n_steps_cap", v->n_steps_cap,
                  "upper bound on n_steps (runtime guard)");
  cmd->add_option("--out", v->out, "output file (CSV or JSON report)");
  cmd->add_option("--seed", v->seed, "RNG seed for randomized audits");
  cmd->add_option("--theta_grid", v->theta_grid,
                  "comma-separated polar angles for sweeps")
      ->delimiter(',');
  cmd->add_option("--ell_list", v->ell_list,
                  "comma-separated spins for sweeps")
      ->delimiter(',');
  cmd->add_flag("--dump_states", v->dump_states,
                "also write every density matrix (binary sidecar)");
}

gyrosim::ExperimentConfig build_config(const CLI::App& cmd,
                                       const FlagValues& v,
                                       gyrosim::Scenario scenario) {
  gyrosim::ExperimentConfig cfg;
  if (cmd.count("--config") > 0) {
    cfg = gyrosim::config_from_json_file(v.config_path);
  }
  cfg.scenario = scenario;
  if (cmd.count("--ell") > 0) {
    cfg.two_ell = gyrosim::SpinSystem::from_ell(v.ell).two_ell();
  }
  if (cmd.count("--sz") > 0) cfg.sz = v.sz;
  if (cmd.count("--tau") > 0) cfg.tau = v.tau;
  if (cmd.count("--variant") > 0) {
    cfg.variant = gyrosim::variant_from_string(v.variant);
  }
  if (cmd.count("--theta0") > 0) cfg.theta0 = v.theta0;
  if (cmd.count("--phi0") > 0) cfg.phi0 = v.phi0;
  if (cmd.count("--n_steps") > 0) cfg.n_steps = v.n_steps;
  if (cmd.count("--n_steps_cap") > 0) cfg.n_steps_cap = v.n_steps_cap;
  if (cmd.count("--out") > 0) cfg.out = v.out;
  if (cmd.count("--seed") > 0) cfg.seed = v.seed;
  if (cmd.count("--theta_grid") > 0) cfg.theta_grid = v.theta_grid;
  if (cmd.count("--ell_list") > 0) {
    cfg.two_ell_list.clear();
    for (const double ell : v.ell_list) {
      cfg.two_ell_list.push_back(
          gyrosim::SpinSystem::from_ell(ell).two_ell());
    }
  }
  if (cmd.count("--dump_states") > 0) cfg.dump_states = v.dump_states;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Collision-model simulator for a spin-l gyroscope hit by a stream of "
      "spin-1/2 probes: exact channel evolution, semiclassical comparisons, "
      "dephasing and purity scans, induced-measurement audits."};
  app.require_subcommand(1);

  struct SubcommandSpec {
    const char* name;
    const char* description;
    gyrosim::Scenario scenario;
  };
  const SubcommandSpec specs[] = {
      {"trajectory", "evolve a coherent state and record Bloch data",
       gyrosim::Scenario::kTrajectory},
      {"compare_semiclassical",
       "trajectory plus leading/corrected equation-of-motion columns and "
       "regime markers",
       gyrosim::Scenario::kCompareSemiclassical},
      {"coherence",
       "decay of the off-diagonal coherent-superposition element over a "
       "theta grid",
       gyrosim::Scenario::kCoherence},
      {"chi_norm",
       "trace norm of the one-step residual operator along the relaxation "
       "flow",
       gyrosim::Scenario::kChiNorm},
      {"purity_scan",
       "polarization deficit vs inverse scaled purity across spins",
       gyrosim::Scenario::kPurityScan},
      {"povm_audit",
       "validate the induced measurement against direct joint-space "
       "simulation (JSON report)",
       gyrosim::Scenario::kPovmAudit},
      {"channel_audit",
       "cross-validate channel routes, complete positivity and fixed points "
       "(JSON report)",
       gyrosim::Scenario::kChannelAudit},
  };

  FlagValues values;
  for (const auto& spec : specs) {
    CLI::App* cmd = app.add_subcommand(spec.name, spec.description);
    add_common_options(cmd, &values);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  const CLI::App* active = app.get_subcommands().front();
  gyrosim::Scenario scenario = gyrosim::Scenario::kTrajectory;
  for (const auto& spec : specs) {
    if (active->get_name() == spec.name) scenario = spec.scenario;
  }

  try {
    const gyrosim::ExperimentConfig cfg =
        build_config(*active, values, scenario);
    const gyrosim::ScenarioResult result = gyrosim::run_scenario(cfg);
    for (const std::string& artifact : result.artifacts) {
      std::cerr << "wrote " << artifact << " (+ manifest)\n";
    }
    std::cout << result.summary_json << "\n";
    if (!result.audit_passed) {
      std::cerr << "audit failed; see report above\n";
      return kExitPhysics;
    }
    return kExitOk;
  } catch (const gyrosim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gyrosim::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const gyrosim::NumericalDegradationError& e) {
    std::cerr << "physics error: " << e.what() << "\n";
    return kExitPhysics;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPhysics;
  }
}
