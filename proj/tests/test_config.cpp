#include <doctest.h>

#include <string>
#include <vector>

#include "gyrosim/experiment_config.hpp"

using namespace gyrosim;

TEST_SUITE("config") {

TEST_CASE("scenario and variant names round-trip") {
  for (const Scenario s :
       {Scenario::kTrajectory, Scenario::kCompareSemiclassical,
        Scenario::kCoherence, Scenario::kChiNorm, Scenario::kPurityScan,
        Scenario::kPovmAudit, Scenario::kChannelAudit}) {
    CHECK(scenario_from_string(to_string(s)) == s);
  }
  for (const ChannelVariant v :
       {ChannelVariant::kUnitary, ChannelVariant::kClosedForm,
        ChannelVariant::kRotatedMeasurement}) {
    CHECK(variant_from_string(to_string(v)) == v);
  }
  CHECK_THROWS_AS(scenario_from_string("warp_drive"), ConfigError);
  CHECK_THROWS_AS(variant_from_string("guess"), ConfigError);
}

TEST_CASE("scenario defaults are internally consistent") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kTrajectory;
  CHECK(cfg.resolved_sz() == doctest::Approx(0.5));
  CHECK(cfg.resolved_variant() == ChannelVariant::kUnitary);
  CHECK(cfg.resolved_out() == std::string("trajectory.csv"));
  CHECK(cfg.resolved_tau(SpinSystem(cfg.two_ell)) ==
        doctest::Approx(kPi / 41.0));

  cfg.scenario = Scenario::kCoherence;
  CHECK(cfg.resolved_sz() == doctest::Approx(0.0));
  CHECK(cfg.resolved_variant() == ChannelVariant::kRotatedMeasurement);
  const std::vector<double> grid = cfg.resolved_theta_grid();
  REQUIRE(grid.size() == 5);
  CHECK(grid.front() == doctest::Approx(kPi / 6));
  CHECK(grid.back() == doctest::Approx(kPi));

  cfg.scenario = Scenario::kPurityScan;
  CHECK(cfg.resolved_theta0() == doctest::Approx(kPi - 0.2));
  CHECK(cfg.resolved_two_ell_list() == std::vector<int>{20, 40, 80});

  cfg.scenario = Scenario::kChannelAudit;
  CHECK(cfg.resolved_two_ell_list() == std::vector<int>{1, 2, 4, 10});

  for (const Scenario s :
       {Scenario::kTrajectory, Scenario::kCompareSemiclassical,
        Scenario::kCoherence, Scenario::kChiNorm, Scenario::kPurityScan,
        Scenario::kPovmAudit, Scenario::kChannelAudit}) {
    ExperimentConfig defaults;
    defaults.scenario = s;
    CHECK_NOTHROW(defaults.validate());
  }
}

TEST_CASE("json parsing accepts both spin conventions") {
  const ExperimentConfig a =
      config_from_json_text(R"({"scenario":"trajectory","two_ell":21})");
  CHECK(a.two_ell == 21);
  const ExperimentConfig b =
      config_from_json_text(R"({"scenario":"trajectory","ell":10.5})");
  CHECK(b.two_ell == 21);
  const ExperimentConfig c = config_from_json_text(
      R"({"scenario":"purity_scan","ell_list":[2.5,5]})");
  CHECK(c.resolved_two_ell_list() == std::vector<int>{5, 10});
  CHECK_THROWS_AS(config_from_json_text(R"({"ell":0.7})"), ConfigError);
}

TEST_CASE("json round trip preserves the resolved experiment") {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::kCoherence;
  cfg.two_ell = 30;
  cfg.sz = 0.25;
  cfg.theta0 = 1.0;
  cfg.phi0 = 0.25;
  cfg.n_steps = 75;
  cfg.seed = 99;
  cfg.dump_states = true;
  cfg.tolerances["coherence_floor"] = 0.05;
  const ExperimentConfig back = config_from_json_text(config_to_json_text(cfg));
  CHECK(back.scenario == cfg.scenario);
  CHECK(back.two_ell == cfg.two_ell);
  CHECK(back.resolved_sz() == doctest::Approx(0.25));
  CHECK(back.resolved_theta0() == doctest::Approx(1.0));
  CHECK(back.phi0 == doctest::Approx(0.25));
  CHECK(back.resolved_n_steps() == 75);
  CHECK(back.seed == 99);
  CHECK(back.dump_states);
  CHECK(back.tolerance_or("coherence_floor", 0.1) == doctest::Approx(0.05));
  CHECK(back.tolerance_or("missing", 0.7) == doctest::Approx(0.7));
  CHECK(back.resolved_variant() == cfg.resolved_variant());
  CHECK(back.resolved_theta_grid() == cfg.resolved_theta_grid());
}

TEST_CASE("malformed configs are rejected with the config error type") {
  CHECK_THROWS_AS(config_from_json_text("{nope"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"scenario":42})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"n_steps":"many"})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_file("/definitely/not/here.json"),
                  ConfigError);
}

TEST_CASE("validation rejects out-of-range experiments") {
  ExperimentConfig cfg;
  cfg.n_steps = -3;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  ExperimentConfig too_long;
  too_long.n_steps = 20000;
  CHECK_THROWS_AS(too_long.validate(), ConfigError);

  ExperimentConfig bad_theta;
  bad_theta.theta0 = 3.5;
  CHECK_THROWS_AS(bad_theta.validate(), ConfigError);

  ExperimentConfig bad_sz;
  bad_sz.sz = 0.75;
  CHECK_THROWS_AS(bad_sz.validate(), ConfigError);

  ExperimentConfig bad_grid;
  bad_grid.scenario = Scenario::kCoherence;
  bad_grid.theta_grid = {0.5, 4.0};
  CHECK_THROWS_AS(bad_grid.validate(), ConfigError);

  ExperimentConfig bad_list;
  bad_list.scenario = Scenario::kPurityScan;
  bad_list.two_ell_list = {0};
  CHECK_THROWS_AS(bad_list.validate(), ConfigError);
}

}  // TEST_SUITE
