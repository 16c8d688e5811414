#include "gyrosim/channel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace gyrosim {

namespace {

constexpr Complex kI{0.0, 1.0};

// Trace over the probe (second, two-dimensional factor) of a 2d x 2d joint
// operator with gyroscope-major index r*2 + s.
Matrix partial_trace_probe(const Matrix& joint) {
  const int d = static_cast<int>(joint.rows()) / 2;
  Matrix out = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      out(i, j) = joint(2 * i, 2 * j) + joint(2 * i + 1, 2 * j + 1);
    }
  }
  return out;
}

}  // namespace

EvolutionCoefficients evolution_coefficients(int dim, double tau) {
  if (dim < 2) {
    throw std::invalid_argument("evolution_coefficients: dim must be >= 2");
  }
  const double d = dim;
  // L.S has the two eigenvalues (d-1)/4 and -(d+1)/4; solving
  // exp(-i tau x) = a + b x on them gives the closed form below.
  const Complex em = std::exp(-kI * ((d - 1.0) * tau / 4.0));
  const Complex ep = std::exp(kI * ((d + 1.0) * tau / 4.0));
  EvolutionCoefficients out;
  out.a = ((d + 1.0) / (2.0 * d)) * em + ((d - 1.0) / (2.0 * d)) * ep;
  out.b = (2.0 / d) * (em - ep);
  out.tau = tau;
  return out;
}

EvolutionCoefficients evolution_coefficients_series(int dim, double tau,
                                                    int order) {
  if (dim < 2) {
    throw std::invalid_argument("evolution_coefficients_series: dim must be >= 2");
  }
  if (order < 0) {
    throw std::invalid_argument("evolution_coefficients_series: order must be >= 0");
  }
  // (L.S)^(k+1) = (l(l+1)/4) b_k I + (a_k - b_k/2) L.S, seeded by the
  // identity (k=0) and L.S itself (k=1).
  const double casimir_quarter = SpinSystem::from_dim(dim).casimir() / 4.0;
  double ak = 1.0;
  double bk = 0.0;
  Complex term(1.0, 0.0);  // (-i tau)^k / k!
  EvolutionCoefficients out;
  out.a = 0.0;
  out.b = 0.0;
  out.tau = tau;
  for (int k = 0; k <= order; ++k) {
    out.a += term * ak;
    out.b += term * bk;
    const double next_a = casimir_quarter * bk;
    const double next_b = ak - 0.5 * bk;
    ak = next_a;
    bk = next_b;
    term *= -kI * tau / static_cast<double>(k + 1);
  }
  return out;
}

double ChannelConfig::special_tau(const SpinSystem& sys) {
  return kPi / sys.dim();
}

ChannelConfig ChannelConfig::at_special_tau(const SpinSystem& sys, double sz,
                                            ChannelVariant variant) {
  ChannelConfig cfg{sys, sz, special_tau(sys), variant};
  cfg.validate();
  return cfg;
}

void ChannelConfig::validate() const {
  if (std::abs(sz) > 0.5 + 1e-12) {
    throw std::invalid_argument("ChannelConfig: |sz| cannot exceed 1/2");
  }
  if (tau < 0.0) {
    throw std::invalid_argument("ChannelConfig: tau must be non-negative");
  }
  if (variant == ChannelVariant::kRotatedMeasurement &&
      std::abs(tau - special_tau(sys)) > 1e-12) {
    throw std::invalid_argument(
        "ChannelConfig: the measurement-frame form is derived at tau = pi/d "
        "only");
  }
}

Channel::Channel(const ChannelConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  ops_ = angular_momentum_operators(cfg_.sys);
  coeff_ = evolution_coefficients(cfg_.sys.dim(), cfg_.tau);
  xi_ = ProbeState(cfg_.sz).matrix();

  if (cfg_.variant == ChannelVariant::kUnitary) {
    const int d = cfg_.sys.dim();
    const Matrix ls =
        Eigen::kroneckerProduct(ops_.lx, 0.5 * pauli_x()).eval() +
        Eigen::kroneckerProduct(ops_.ly, 0.5 * pauli_y()).eval() +
        Eigen::kroneckerProduct(ops_.lz, 0.5 * pauli_z()).eval();
    joint_u_ = coeff_.a * Matrix::Identity(2 * d, 2 * d) + coeff_.b * ls;
  }
}

Matrix Channel::apply(const Matrix& op) const {
  const int d = cfg_.sys.dim();
  if (op.rows() != d || op.cols() != d) {
    throw std::invalid_argument("Channel::apply: operator has wrong dimension");
  }

  switch (cfg_.variant) {
    case ChannelVariant::kUnitary: {
      const Matrix joint = Eigen::kroneckerProduct(op, xi_);
      return partial_trace_probe(joint_u_ * joint * joint_u_.adjoint());
    }
    case ChannelVariant::kClosedForm: {
      // Four-term expansion of the conjugation. The probe trace in the
      // double-commutator term reduces to (1/4) sum_i L_i op L_i minus an
      // sz-weighted antisymmetric xy pair.
      const double dd = d;
      const double s = cfg_.sz;
      const double sin_q = std::sin(cfg_.tau * dd / 4.0);
      const double cos_q = std::cos(cfg_.tau * dd / 4.0);
      const double sin_h = std::sin(cfg_.tau * dd / 2.0);
      const double scalar = cos_q * cos_q + sin_q * sin_q / (dd * dd);

      const Matrix anti = op * ops_.lz + ops_.lz * op;
      const Matrix comm = op * ops_.lz - ops_.lz * op;
      Matrix sandwich =
          0.25 * (ops_.lx * op * ops_.lx + ops_.ly * op * ops_.ly +
                  ops_.lz * op * ops_.lz);
      sandwich -= (kI * s / 2.0) *
                  (ops_.lx * op * ops_.ly - ops_.ly * op * ops_.lx);

      return scalar * op + (4.0 / (dd * dd)) * sin_q * sin_q * s * anti +
             (16.0 / (dd * dd)) * sin_q * sin_q * sandwich +
             (2.0 / dd) * kI * sin_h * s * comm;
    }
    case ChannelVariant::kRotatedMeasurement:
      return apply_rotated(op, 0.0);
  }
  throw std::logic_error("Channel::apply: unknown variant");
}

Matrix Channel::apply_rotated(const Matrix& op, double frame_theta) const {
  const int d = cfg_.sys.dim();
  if (op.rows() != d || op.cols() != d) {
    throw std::invalid_argument("Channel::apply_rotated: wrong dimension");
  }
  if (std::abs(cfg_.tau - ChannelConfig::special_tau(cfg_.sys)) > 1e-12) {
    throw std::invalid_argument(
        "Channel::apply_rotated: only defined at tau = pi/d");
  }
  const double dd = d;
  const double s = cfg_.sz;
  const double ct = std::cos(frame_theta);
  const double st = std::sin(frame_theta);
  const RotatedFrame f = rotated_operators(ops_, frame_theta);

  Matrix out = ((dd * dd + 1.0) / (2.0 * dd * dd)) * op;
  out += (2.0 / (dd * dd)) *
         (f.lx * op * f.lx + f.ly * op * f.ly + f.lz * op * f.lz);
  out += (4.0 / (dd * dd)) * kI * s * st * (f.ly * op * f.lz - f.lz * op * f.ly);
  out += (4.0 / (dd * dd)) * kI * s * ct * (f.ly * op * f.lx - f.lx * op * f.ly);
  out += (2.0 / (dd * dd)) * s * ct * (f.lz * op + op * f.lz);
  out -= (2.0 / (dd * dd)) * s * st * (f.lx * op + op * f.lx);
  return out;
}

Matrix apply_channel_unitary(const Matrix& op, const ChannelConfig& cfg) {
  ChannelConfig local = cfg;
  local.variant = ChannelVariant::kUnitary;
  return Channel(local).apply(op);
}

Matrix apply_channel_closed_form(const Matrix& op, const ChannelConfig& cfg) {
  ChannelConfig local = cfg;
  local.variant = ChannelVariant::kClosedForm;
  return Channel(local).apply(op);
}

Matrix apply_channel_rotated(const Matrix& op, double frame_theta,
                             const ChannelConfig& cfg) {
  ChannelConfig local = cfg;
  local.variant = ChannelVariant::kRotatedMeasurement;
  return Channel(local).apply_rotated(op, frame_theta);
}

Matrix apply_channel(const Matrix& op, const ChannelConfig& cfg) {
  return Channel(cfg).apply(op);
}

ChoiResult choi_matrix(const ChannelConfig& cfg) {
  const int d = cfg.sys.dim();
  const Channel channel(cfg);
  Matrix choi = Matrix::Zero(d * d, d * d);
  Matrix dyad = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      dyad.setZero();
      dyad(i, j) = 1.0;
      choi.block(i * d, j * d, d, d) = channel.apply(dyad);
    }
  }

  ChoiResult out;
  out.matrix = choi;
  out.hermiticity_residual = (choi - choi.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint()),
                                           Eigen::EigenvaluesOnly);
  out.min_eigenvalue = es.eigenvalues().minCoeff();
  out.input_marginal = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      out.input_marginal(i, j) = choi.block(i * d, j * d, d, d).trace();
    }
  }
  return out;
}

Trajectory iterate_channel(const DensityMatrix& rho0, int n_steps,
                           const ChannelConfig& cfg, IterateOptions opts) {
  if (n_steps < 0) {
    throw std::invalid_argument("iterate_channel: n_steps must be >= 0");
  }
  const Channel channel(cfg);
  Trajectory traj;
  traj.records.reserve(n_steps + 1);

  Matrix rho = rho0.matrix();
  for (int step = 0; step <= n_steps; ++step) {
    TrajectoryRecord rec;
    rec.step = step;
    rec.bloch = bloch_estimate(rho, cfg.sys);
    rec.purity = purity(rho);
    if (opts.retain_states) rec.rho = rho;
    traj.records.push_back(std::move(rec));

    if (step == n_steps) break;
    rho = channel.apply(rho);

    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                             Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -opts.positivity_abort) {
      throw NumericalDegradationError(
          "iterate_channel: state left the positive cone at step " +
          std::to_string(step + 1) + " (min eigenvalue " +
          std::to_string(min_eig) + ")");
    }
  }
  return traj;
}

}  // namespace gyrosim
