#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Eigenvalues>

#include "gyrosim/povm.hpp"
#include "gyrosim/spin_algebra.hpp"
#include "test_support.hpp"

using namespace gyrosim;
using gyrosim::testing::max_abs;
using gyrosim::testing::random_density;

namespace {

const std::vector<Eigen::Vector3d> kAxes = {
    {0.0, 0.0, 1.0},
    {1.0, 0.0, 0.0},
    {0.0, 1.0, 0.0},
    {1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0)},
    {0.6, 0.0, 0.8}};

ChannelConfig special_cfg(int two_ell, double sz) {
  return ChannelConfig::at_special_tau(SpinSystem(two_ell), sz,
                                       ChannelVariant::kClosedForm);
}

double outcome_weight(double sz, const Eigen::Vector3d& u, int sign) {
  return 0.5 * (1.0 + sign * 2.0 * sz * u.z());
}

}  // namespace

TEST_SUITE("povm") {

TEST_CASE("effects are complete, positive and reproduce joint probabilities") {
  std::mt19937_64 rng(41);
  for (const int two_ell : {1, 4, 10}) {
    const int d = two_ell + 1;
    for (const double sz : {0.0, 0.25, 0.5}) {
      for (const double tau :
           {ChannelConfig::special_tau(SpinSystem(two_ell)), 0.3}) {
        const ChannelConfig cfg{SpinSystem(two_ell), sz, tau,
                                ChannelVariant::kClosedForm};
        for (const auto& u : kAxes) {
          const PovmPair pair = induced_povm_general(u, cfg);
          CHECK(max_abs(pair.lambda_plus + pair.lambda_minus -
                        Matrix::Identity(d, d)) < 1e-12);
          for (const Matrix* eff : {&pair.lambda_plus, &pair.lambda_minus}) {
            Eigen::SelfAdjointEigenSolver<Matrix> es(*eff);
            CHECK(es.eigenvalues().minCoeff() > -1e-10);
          }
          for (int trial = 0; trial < 3; ++trial) {
            const Matrix rho = random_density(d, rng);
            const double p_plus =
                (pair.lambda_plus * rho).trace().real();
            const double p_minus =
                (pair.lambda_minus * rho).trace().real();
            CHECK(std::abs(p_plus -
                           direct_outcome_probability(u, cfg, rho, +1)) <
                  1e-12);
            CHECK(std::abs(p_minus -
                           direct_outcome_probability(u, cfg, rho, -1)) <
                  1e-12);
            CHECK(std::abs(p_plus + p_minus - 1.0) < 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("zero interaction time yields outcome weights with no state dependence") {
  for (const double sz : {0.0, 0.3}) {
    const ChannelConfig cfg{SpinSystem(6), sz, 0.0,
                            ChannelVariant::kClosedForm};
    for (const auto& u : kAxes) {
      const PovmPair pair = induced_povm_general(u, cfg);
      const Matrix id = Matrix::Identity(7, 7);
      CHECK(max_abs(pair.lambda_plus - outcome_weight(sz, u, +1) * id) <
            1e-13);
      CHECK(max_abs(pair.lambda_minus - outcome_weight(sz, u, -1) * id) <
            1e-13);
    }
  }
}

TEST_CASE("printed closed form evaluates to its textbook instance on the x axis") {
  const SpinSystem sys(8);
  const auto ops = angular_momentum_operators(sys);
  const ChannelConfig cfg = special_cfg(8, 0.5);
  const PovmPair pair =
      induced_povm_closed_form(Eigen::Vector3d(1.0, 0.0, 0.0), cfg);
  const Matrix id = Matrix::Identity(sys.dim(), sys.dim());
  const Matrix expected_plus =
      0.25 * id + 0.5 * ops.ly / (sys.ell() + 0.5);
  const Matrix expected_minus =
      0.25 * id - 0.5 * ops.ly / (sys.ell() + 0.5);
  CHECK(max_abs(pair.lambda_plus - expected_plus) < 1e-13);
  CHECK(max_abs(pair.lambda_minus - expected_minus) < 1e-13);
}

TEST_CASE("printed closed form misses half the identity") {
  for (const int two_ell : {1, 2, 4, 10}) {
    const int d = two_ell + 1;
    const Matrix id = Matrix::Identity(d, d);
    for (const double sz : {0.0, 0.25, 0.5}) {
      const ChannelConfig cfg = special_cfg(two_ell, sz);
      for (const auto& u : kAxes) {
        const PovmPair closed = induced_povm_closed_form(u, cfg);
        const double defect =
            max_abs(closed.lambda_plus + closed.lambda_minus - id);
        CHECK(defect == doctest::Approx(0.5).epsilon(1e-10));

        // Doubling the scalar weight restores completeness up to O(1/d).
        const Matrix plus = closed.lambda_plus +
                            0.5 * outcome_weight(sz, u, +1) * id;
        const Matrix minus = closed.lambda_minus +
                             0.5 * outcome_weight(sz, u, -1) * id;
        const double doubled_defect = max_abs(plus + minus - id);
        CHECK(doubled_defect < 0.6 / d);
      }
    }
  }
}

TEST_CASE("axis along z carries only weak longitudinal information") {
  for (const int two_ell : {2, 10, 40}) {
    const SpinSystem sys(two_ell);
    const double d = sys.dim();
    const Eigen::Vector3d z(0.0, 0.0, 1.0);
    for (const double sz : {0.0, 0.25, 0.5}) {
      const PovmPair pair = induced_povm_general(z, special_cfg(two_ell, sz));
      const AxisProjection proj = project_onto_linear_span(
          pair.lambda_plus - pair.lambda_minus, sys);
      CHECK(std::abs(proj.coeff_l.x()) < 1e-12);
      CHECK(std::abs(proj.coeff_l.y()) < 1e-12);
      // The longitudinal readout rate is 4/d^2 regardless of the probe bias.
      CHECK(proj.coeff_l.z() ==
            doctest::Approx(4.0 / (d * d)).epsilon(1e-10));
      CHECK(std::abs(proj.coeff_l.z()) <= 10.0 / (d * d));
      // The quadrupole leftover scales with the bias.
      if (sz == 0.0) {
        CHECK(proj.residual_norm < 1e-12);
      } else {
        CHECK(proj.residual_norm > 1e-3);
      }
    }
  }
  // Even unpolarized probes read the longitudinal component, weakly.
  const SpinSystem sys(10);
  const double d = sys.dim();
  const auto ops = angular_momentum_operators(sys);
  const PovmPair flat = induced_povm_general(Eigen::Vector3d(0.0, 0.0, 1.0),
                                             special_cfg(10, 0.0));
  CHECK(max_abs(flat.lambda_plus - flat.lambda_minus -
                (4.0 / (d * d)) * ops.lz) < 1e-13);
}

TEST_CASE("difference of effects develops a quadrupole part for biased tilted axes") {
  const SpinSystem sys(10);
  const Eigen::Vector3d tilted(0.6, 0.0, 0.8);
  const PovmPair biased = induced_povm_general(tilted, special_cfg(10, 0.5));
  const AxisProjection with_bias = project_onto_linear_span(
      biased.lambda_plus - biased.lambda_minus, sys);
  CHECK(with_bias.residual_norm > 1e-6);

  const PovmPair unbiased = induced_povm_general(tilted, special_cfg(10, 0.0));
  const AxisProjection without_bias = project_onto_linear_span(
      unbiased.lambda_plus - unbiased.lambda_minus, sys);
  CHECK(without_bias.residual_norm < 1e-12);
}

TEST_CASE("linear span projection recovers planted coefficients") {
  const SpinSystem sys(5);
  const auto ops = angular_momentum_operators(sys);
  const Matrix id = Matrix::Identity(sys.dim(), sys.dim());
  const Matrix linear = 0.3 * id + 1.2 * ops.lx - 0.7 * ops.lz;
  const AxisProjection clean = project_onto_linear_span(linear, sys);
  CHECK(clean.coeff_i == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(clean.coeff_l.x() == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(clean.coeff_l.y() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(clean.coeff_l.z() == doctest::Approx(-0.7).epsilon(1e-12));
  CHECK(clean.residual_norm < 1e-12);

  const Matrix quad = linear + (ops.lx * ops.lz + ops.lz * ops.lx);
  const AxisProjection dirty = project_onto_linear_span(quad, sys);
  CHECK(dirty.coeff_l.x() == doctest::Approx(1.2).epsilon(1e-10));
  CHECK(dirty.residual_norm > 0.1);
}

}  // TEST_SUITE
