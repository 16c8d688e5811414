#pragma once

#include <optional>

#include "gyrosim/spin_system.hpp"
#include "gyrosim/types.hpp"

namespace gyrosim {

// First moments of L mapped to polar data: r = |<L>|/l, theta the angle from
// +z, phi_az the azimuth. Angles are left empty when r is numerically zero.
struct BlochEstimate {
  double lx = 0.0;
  double ly = 0.0;
  double lz = 0.0;
  double r = 0.0;
  std::optional<double> theta;
  std::optional<double> phi_az;
};

BlochEstimate bloch_estimate(const Matrix& rho, const SpinSystem& sys);

// First and second moments in the frame rotated about y by theta. Cross
// moments are symmetrized: xy = <{Lx,Ly}>/2 and likewise xz.
struct MomentSet {
  double x = 0.0;
  double z = 0.0;
  double xx = 0.0;
  double yy = 0.0;
  double zz = 0.0;
  double xy = 0.0;
  double xz = 0.0;
};

MomentSet moment_set(const Matrix& rho, const SpinSystem& sys, double theta);

// One-interaction update of the frame-theta first moments, written in terms
// of time-t moments only. Matches the measurement channel exactly when the
// frame is aligned so that m.x = 0.
struct MomentUpdate {
  double lx_next = 0.0;
  double lz_next = 0.0;
};

MomentUpdate moment_update_prediction(const MomentSet& m, double theta,
                                      double sz, const SpinSystem& sys);

double purity(const Matrix& rho);

// Sum of singular values.
double trace_norm(const Matrix& op);

}  // namespace gyrosim
