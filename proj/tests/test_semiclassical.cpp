#include <doctest.h>

#include <cmath>
#include <vector>

#include "gyrosim/channel.hpp"
#include "gyrosim/density_matrix.hpp"
#include "gyrosim/semiclassical.hpp"
#include "gyrosim/spin_algebra.hpp"

using namespace gyrosim;

namespace {

SemiclassicalState make_state(double r, double theta, double ell, double sz) {
  SemiclassicalState s;
  s.r = r;
  s.theta = theta;
  s.ell = ell;
  s.sz = sz;
  return s;
}

}  // namespace

TEST_SUITE("semiclassical") {

TEST_CASE("leading rates at the pinned points") {
  // Full polarization is stationary in r.
  CHECK(rhs_leading(make_state(1.0, 1.1, 20.0, 0.5)).rdot ==
        doctest::Approx(0.0).epsilon(1e-15));
  // The pole is stationary in theta.
  CHECK(rhs_leading(make_state(0.7, 0.0, 20.0, 0.5)).thetadot ==
        doctest::Approx(0.0).epsilon(1e-15));
  // Half polarization at the equator with lambda = 1/40.
  const Rates rates = rhs_leading(make_state(0.5, kPi / 2, 20.0, 0.5));
  CHECK(rates.thetadot == doctest::Approx(-0.03125).epsilon(1e-12));
}

TEST_CASE("corrected rate at the pinned points") {
  for (const double ell : {10.0, 20.0}) {
    const CorrectedRate top = rhs_corrected(make_state(1.0, kPi, ell, 0.5));
    CHECK(top.rdot == doctest::Approx(-0.625 / (ell * ell)).epsilon(1e-12));
    const CorrectedRate flat = rhs_corrected(make_state(0.8, kPi, ell, 0.0));
    CHECK(flat.rdot == doctest::Approx(-0.8 / (2.0 * ell * ell)).epsilon(1e-12));
  }
  // Full polarization always loses a little, whatever the angle.
  for (double theta = 0.0; theta <= kPi; theta += kPi / 7) {
    CHECK(rhs_corrected(make_state(1.0, theta, 15.0, 0.5)).rdot < 0.0);
  }
}

TEST_CASE("integration preserves the leading fixed line r = 1") {
  const auto states = integrate(make_state(1.0, 2.0943951023931953, 20.0, 0.5),
                                200);
  REQUIRE(states.size() == 201);
  for (const auto& s : states) {
    CHECK(std::abs(s.r - 1.0) < 1e-12);
  }
  // And theta follows the exact relaxation flow.
  const double lambda = states.front().lambda();
  for (std::size_t t = 0; t < states.size(); ++t) {
    const double expected = analytic_theta(double(t), states.front().theta,
                                           lambda);
    CHECK(std::abs(states[t].theta - expected) < 1e-6);
  }
}

TEST_CASE("depolarized state at the pole recovers monotonically") {
  const auto states = integrate(make_state(0.5, 0.0, 20.0, 0.5), 400);
  for (std::size_t t = 1; t < states.size(); ++t) {
    CHECK(states[t].r >= states[t - 1].r - 1e-12);
  }
  CHECK(states.back().r > 0.9);
}

TEST_CASE("relaxation flow closed form") {
  const double lambda = 0.05;
  // After one half-life of the half-angle tangent: 2 atan(1/2).
  const double t_half = std::log(2.0) / lambda;
  CHECK(analytic_theta(t_half, kPi / 2, lambda) ==
        doctest::Approx(0.9272952180016122).epsilon(1e-12));
  CHECK(analytic_theta(4000.0, 2.8, lambda) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(analytic_theta(0.0, 1.3, lambda) ==
        doctest::Approx(1.3).epsilon(1e-14));
  // The flow solves thetadot = -lambda sin(theta).
  for (const double t : {0.0, 3.0, 17.0}) {
    const double h = 1e-5;
    const double numeric = (analytic_theta(t + h, 2.2, lambda) -
                            analytic_theta(t - h, 2.2, lambda)) /
                           (2.0 * h);
    const double direct = -lambda * std::sin(analytic_theta(t, 2.2, lambda));
    CHECK(std::abs(numeric - direct) < 1e-8);
  }
}

TEST_CASE("deficit decay closed form") {
  const double lambda = 0.0125;
  // At the pole the deficit simply decays at twice the relaxation rate.
  for (const double t : {5.0, 25.0, 80.0}) {
    CHECK(analytic_epsilon(t, 5.0, 0.2, 0.0, lambda) ==
          doctest::Approx(0.2 * std::exp(-2.0 * lambda * (t - 5.0)))
              .epsilon(1e-12));
  }
  // Pinning is exact at the reference time for any starting angle.
  CHECK(analytic_epsilon(7.0, 7.0, 0.31, 2.9, lambda) ==
        doctest::Approx(0.31).epsilon(1e-14));
}

TEST_CASE("slow rate enters only through lambda t") {
  const double theta0 = 2.4;
  for (const double c : {0.5, 3.0}) {
    CHECK(analytic_theta(10.0, theta0, 0.02) ==
          doctest::Approx(analytic_theta(10.0 / c, theta0, 0.02 * c))
              .epsilon(1e-12));
    CHECK(analytic_epsilon(10.0, 2.0, 0.1, theta0, 0.02) ==
          doctest::Approx(analytic_epsilon(10.0 / c, 2.0 / c, 0.1, theta0,
                                           0.02 * c))
              .epsilon(1e-12));
  }
}

TEST_CASE("regime detection stays silent at a fixed point") {
  const std::vector<double> r(300, 1.0);
  const std::vector<double> theta(300, 0.0);
  const RegimeMarkers markers = regime_detect(r, theta, 20.0, 0.5);
  CHECK_FALSE(markers.t1.has_value());
  CHECK_FALSE(markers.t2.has_value());
  CHECK_FALSE(markers.t3.has_value());
  CHECK(markers.peak_epsilon == doctest::Approx(0.0));
}

TEST_CASE("regime markers come out ordered on a simulated inversion") {
  const SpinSystem sys(20);
  const ChannelConfig cfg =
      ChannelConfig::at_special_tau(sys, 0.5, ChannelVariant::kClosedForm);
  const DensityMatrix rho0 =
      DensityMatrix::pure(coherent_state(sys, kPi - 0.2));
  const Trajectory traj = iterate_channel(rho0, 250, cfg);
  std::vector<double> r, theta;
  for (const auto& rec : traj.records) {
    r.push_back(rec.bloch.r);
    theta.push_back(rec.bloch.theta.value_or(theta.empty() ? 0.0
                                                           : theta.back()));
  }
  const RegimeMarkers markers = regime_detect(r, theta, sys.ell(), 0.5);
  REQUIRE(markers.t1.has_value());
  REQUIRE(markers.t2.has_value());
  REQUIRE(markers.t3.has_value());
  CHECK(*markers.t1 < *markers.t2);
  CHECK(*markers.t2 < *markers.t3);
  CHECK(markers.peak_epsilon > 0.1);
  CHECK(markers.peak_step > *markers.t1);
}

}  // TEST_SUITE
