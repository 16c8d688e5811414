#pragma once

#include <optional>
#include <vector>

namespace gyrosim {

// Macroscopic state of the gyroscope: relative polarization r = |<L>|/l and
// polar angle theta. Time is measured in interactions; the slow rate is
// lambda = sz/l.
struct SemiclassicalState {
  double r = 1.0;
  double theta = 0.0;
  double ell = 0.0;
  double sz = 0.0;

  double lambda() const { return sz / ell; }
  double epsilon() const { return 1.0 - r; }
};

struct Rates {
  double rdot = 0.0;
  double thetadot = 0.0;
};

// Leading-order equations of motion. Requires r > 0 (thetadot carries 1/r).
Rates rhs_leading(const SemiclassicalState& s);

// rdot with the 1/l^2 corrections. Derived for theta > pi/2 and large l;
// within_validity reports whether the input is in that regime.
struct CorrectedRate {
  double rdot = 0.0;
  bool within_validity = false;
};

CorrectedRate rhs_corrected(const SemiclassicalState& s);

struct IntegrateOptions {
  bool use_corrections = false;
  // Base RK4 steps per interaction; quadrupled near theta ~ pi when the
  // corrected term is active.
  int substeps = 1;
  bool auto_substep = true;
};

// RK4 evolution, one state per interaction, s0 first (n_steps+1 entries).
std::vector<SemiclassicalState> integrate(const SemiclassicalState& s0,
                                          int n_steps,
                                          IntegrateOptions opts = {});

// Exact flow of thetadot = -lambda sin(theta): the half-angle tangent decays
// exponentially. Requires theta0 in [0, pi).
double analytic_theta(double t, double theta0, double lambda);

// Polarization deficit along the relaxation flow, pinned to eps_ref at time
// tau_ref. theta0 is the polar angle at t = 0 of the same flow.
double analytic_epsilon(double t, double tau_ref, double eps_ref,
                        double theta0, double lambda);

struct RegimeThresholds {
  double track_abs = 0.02;      // absolute r window for the tracked regimes
  double local_rel = 0.25;      // relative one-step error closing regime 1
  int local_run = 5;            // consecutive steps required below local_rel
  double analytic_rel = 0.15;   // relative epsilon tolerance for regime 3
  double epsilon_floor_dim = 1.0;  // track epsilon only while eps*d >= this
};

struct RegimeMarkers {
  std::optional<int> t1;  // end of the initial drop
  std::optional<int> t2;  // corrected equation stops tracking r
  std::optional<int> t3;  // analytic recovery expression takes over
  double peak_epsilon = 0.0;
  int peak_step = 0;
};

// Splits a simulated trajectory (r_n, theta_n) into the drop, corrected,
// crossover and analytic-recovery regimes. Returns empty markers for
// trajectories pinned at a fixed point.
RegimeMarkers regime_detect(const std::vector<double>& r,
                            const std::vector<double>& theta, double ell,
                            double sz, RegimeThresholds thr = {});

}  // namespace gyrosim
