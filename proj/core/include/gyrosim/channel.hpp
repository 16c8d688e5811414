#pragma once

#include <optional>
#include <vector>

#include "gyrosim/density_matrix.hpp"
#include "gyrosim/estimators.hpp"
#include "gyrosim/spin_algebra.hpp"
#include "gyrosim/spin_system.hpp"
#include "gyrosim/types.hpp"

namespace gyrosim {

// Scalars a, b of exp(-i tau L.S) = a I + b L.S on the joint space. The two
// eigenvalues of L.S, (d-1)/4 and -(d+1)/4, fix them in closed form.
struct EvolutionCoefficients {
  Complex a;
  Complex b;
  double tau = 0.0;
};

EvolutionCoefficients evolution_coefficients(int dim, double tau);

// Partial sums of the Taylor series of exp(-i tau L.S) using the power
// recurrence (L.S)^k = a_k I + b_k L.S. Exposed as a second, series-based
// route to the same scalars.
EvolutionCoefficients evolution_coefficients_series(int dim, double tau,
                                                    int order);

enum class ChannelVariant {
  kUnitary,           // conjugate by exp(-i tau L.S) on the joint space
  kClosedForm,        // four-term expansion with the probe traced analytically
  kRotatedMeasurement // measurement-frame form, only at tau = pi/d
};

// One gyroscope-probe interaction. Probe state is diagonal in Sz; the
// default interaction time is tau = pi/d.
struct ChannelConfig {
  SpinSystem sys;
  double sz = 0.5;
  double tau = 0.0;
  ChannelVariant variant = ChannelVariant::kUnitary;

  static double special_tau(const SpinSystem& sys);
  static ChannelConfig at_special_tau(const SpinSystem& sys, double sz,
                                      ChannelVariant variant);

  void validate() const;  // throws std::invalid_argument
};

// Precomputes the operators for a config once; apply() acts linearly on any
// d x d operator, with no positivity assumption on the input.
class Channel {
 public:
  explicit Channel(const ChannelConfig& cfg);

  const ChannelConfig& config() const { return cfg_; }
  Matrix apply(const Matrix& op) const;

  // Measurement-frame evaluation at an explicit frame angle. The result is
  // frame-independent; the parameter only selects the operators used.
  Matrix apply_rotated(const Matrix& op, double frame_theta) const;

 private:
  ChannelConfig cfg_;
  AngularMomentum ops_;
  EvolutionCoefficients coeff_;
  Matrix joint_u_;       // exp(-i tau L.S), built for the unitary route
  Eigen::Matrix2cd xi_;  // probe state
};

Matrix apply_channel_unitary(const Matrix& op, const ChannelConfig& cfg);
Matrix apply_channel_closed_form(const Matrix& op, const ChannelConfig& cfg);
Matrix apply_channel_rotated(const Matrix& op, double frame_theta,
                             const ChannelConfig& cfg);
Matrix apply_channel(const Matrix& op, const ChannelConfig& cfg);

// Choi matrix C = sum_ij |i><j| (x) E(|i><j|); input copy first, output
// second. For the identity channel C = d |Omega><Omega|.
struct ChoiResult {
  Matrix matrix;
  double min_eigenvalue = 0.0;
  double hermiticity_residual = 0.0;
  Matrix input_marginal;  // Tr_out C, equals I_d for a trace-preserving map
};

ChoiResult choi_matrix(const ChannelConfig& cfg);

struct TrajectoryRecord {
  int step = 0;
  BlochEstimate bloch;
  double purity = 0.0;
  std::optional<Matrix> rho;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;
};

struct IterateOptions {
  bool retain_states = false;
  double positivity_abort = 1e-8;
};

// Applies the channel n times, recording Bloch data and purity for every
// step including step 0. Aborts with NumericalDegradationError if an iterate
// leaves the density-matrix cone by more than positivity_abort.
Trajectory iterate_channel(const DensityMatrix& rho0, int n_steps,
                           const ChannelConfig& cfg, IterateOptions opts = {});

}  // namespace gyrosim
