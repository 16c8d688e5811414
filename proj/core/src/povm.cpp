#include "gyrosim/povm.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/KroneckerProduct>

namespace gyrosim {

namespace {

Eigen::Matrix2cd outcome_projector(const Eigen::Vector3d& u, int sign) {
  const double s = sign >= 0 ? 1.0 : -1.0;
  return 0.5 * (Eigen::Matrix2cd::Identity() +
                s * (u.x() * pauli_x() + u.y() * pauli_y() + u.z() * pauli_z()));
}

void check_axis(const Eigen::Vector3d& u) {
  if (std::abs(u.norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("induced POVM: measurement axis must be a unit vector");
  }
}

Matrix joint_interaction(const ChannelConfig& cfg,
                         const AngularMomentum& ops) {
  const int d = cfg.sys.dim();
  const EvolutionCoefficients c = evolution_coefficients(d, cfg.tau);
  const Matrix ls =
      Eigen::kroneckerProduct(ops.lx, 0.5 * pauli_x()).eval() +
      Eigen::kroneckerProduct(ops.ly, 0.5 * pauli_y()).eval() +
      Eigen::kroneckerProduct(ops.lz, 0.5 * pauli_z()).eval();
  return c.a * Matrix::Identity(2 * d, 2 * d) + c.b * ls;
}

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

PovmPair induced_povm_general(const Eigen::Vector3d& u,
                              const ChannelConfig& cfg) {
  check_axis(u);
  cfg.validate();
  const int d = cfg.sys.dim();
  const AngularMomentum ops = angular_momentum_operators(cfg.sys);
  const Matrix joint_u = joint_interaction(cfg, ops);
  const Matrix sqrt_xi = Eigen::kroneckerProduct(
      Matrix::Identity(d, d), ProbeState(cfg.sz).sqrt_matrix());

  const auto effect = [&](int sign) {
    const Matrix proj = Eigen::kroneckerProduct(Matrix::Identity(d, d),
                                                outcome_projector(u, sign));
    const Matrix heralded =
        sqrt_xi * joint_u.adjoint() * proj * joint_u * sqrt_xi;
    return partial_trace_probe(heralded);
  };

  PovmPair out;
  out.lambda_plus = effect(+1);
  out.lambda_minus = effect(-1);
  out.axis_u = u;
  return out;
}

PovmPair induced_povm_closed_form(const Eigen::Vector3d& u,
                                  const ChannelConfig& cfg) {
  check_axis(u);
  cfg.validate();
  if (std::abs(cfg.tau - ChannelConfig::special_tau(cfg.sys)) > 1e-12) {
    throw std::invalid_argument(
        "induced_povm_closed_form: printed form holds at tau = pi/d only");
  }
  const int d = cfg.sys.dim();
  const AngularMomentum ops = angular_momentum_operators(cfg.sys);
  const Eigen::Matrix2cd xi = ProbeState(cfg.sz).matrix();
  const Eigen::Vector3d mean_spin(0.0, 0.0, cfg.sz);
  const Eigen::Vector3d cross = mean_spin.cross(u);
  const Matrix cross_l =
      cross.x() * ops.lx + cross.y() * ops.ly + cross.z() * ops.lz;
  const double denom = cfg.sys.ell() + 0.5;

  const auto effect = [&](int sign) {
    const double weight =
        0.5 * (outcome_projector(u, sign) * xi).trace().real();
    const double s = sign >= 0 ? 1.0 : -1.0;
    return (weight * Matrix::Identity(d, d) + (s / denom) * cross_l).eval();
  };

  PovmPair out;
  out.lambda_plus = effect(+1);
  out.lambda_minus = effect(-1);
  out.axis_u = u;
  return out;
}

double direct_outcome_probability(const Eigen::Vector3d& u,
                                  const ChannelConfig& cfg, const Matrix& rho,
                                  int sign) {
  check_axis(u);
  const int d = cfg.sys.dim();
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("direct_outcome_probability: dimension mismatch");
  }
  const AngularMomentum ops = angular_momentum_operators(cfg.sys);
  const Matrix joint_u = joint_interaction(cfg, ops);
  const Matrix joint_state =
      Eigen::kroneckerProduct(rho, ProbeState(cfg.sz).matrix());
  const Matrix proj = Eigen::kroneckerProduct(Matrix::Identity(d, d),
                                              outcome_projector(u, sign));
  return (proj * joint_u * joint_state * joint_u.adjoint()).trace().real();
}

AxisProjection project_onto_linear_span(const Matrix& op,
                                        const SpinSystem& sys) {
  const int d = sys.dim();
  if (op.rows() != d || op.cols() != d) {
    throw std::invalid_argument("project_onto_linear_span: dimension mismatch");
  }
  const AngularMomentum ops = angular_momentum_operators(sys);

  // {I, Lx, Ly, Lz} are mutually orthogonal in the Frobenius inner product,
  // so the projection splits into independent components.
  const auto component = [&](const Matrix& basis) {
    const double norm_sq = basis.squaredNorm();
    return (basis.adjoint() * op).trace() / norm_sq;
  };

  const Matrix eye = Matrix::Identity(d, d);
  const Complex ci = component(eye);
  const Complex cx = component(ops.lx);
  const Complex cy = component(ops.ly);
  const Complex cz = component(ops.lz);

  AxisProjection out;
  out.coeff_i = ci.real();
  out.coeff_l = Eigen::Vector3d(cx.real(), cy.real(), cz.real());
  const Matrix residual =
      op - ci * eye - cx * ops.lx - cy * ops.ly - cz * ops.lz;
  out.residual_norm = residual.norm();
  return out;
}

}  // namespace gyrosim
