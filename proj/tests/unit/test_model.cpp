/*
 Copyright 2026 The alip-stairs Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "alip/errors.hpp"
#include "alip/model.hpp"

using namespace alip;

TEST(ComAngle, HandValues) {
  EXPECT_DOUBLE_EQ(com_angle({0.0, 1.0}), 0.0);
  EXPECT_NEAR(com_angle({1.0, 1.0}), std::numbers::pi / 4.0, 1e-15);
  EXPECT_NEAR(com_angle({-0.2, 0.95}), -0.20749, 1e-5);
  EXPECT_NEAR(com_angle({-0.2, 0.95}), std::atan2(-0.2, 0.95), 1e-15);
}

TEST(ComAngle, RejectsCoMAtOrBelowContact) {
  EXPECT_THROW(com_angle({0.1, 0.0}), DomainError);
  EXPECT_THROW(com_angle({0.1, -0.5}), DomainError);
}

TEST(PendulumLength, HandValues) {
  EXPECT_DOUBLE_EQ(pendulum_length({0.0, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(pendulum_length({3.0, 4.0}), 5.0);
  EXPECT_NEAR(pendulum_length({-0.2, 0.95}), 0.970824, 1e-6);
  EXPECT_THROW(pendulum_length({0.0, 0.0}), DomainError);
}

TEST(NonlinearDynamics, Examples) {
  const AlipParams p{32.0, 9.81};
  const auto eq = nonlinear_dynamics({0.0, 0.0}, 0.9, 0.0, 0.0, p);
  EXPECT_EQ(eq.dtheta_c, 0.0);
  EXPECT_EQ(eq.dL, 0.0);

  const auto spin = nonlinear_dynamics({0.0, 32.0}, 1.0, 0.0, 0.0, p);
  EXPECT_DOUBLE_EQ(spin.dtheta_c, 1.0);
  EXPECT_DOUBLE_EQ(spin.dL, 0.0);

  const auto d = nonlinear_dynamics({0.1, 5.0}, 1.0, 0.0, 2.0, p);
  EXPECT_NEAR(d.dtheta_c, 0.15625, 1e-12);
  EXPECT_NEAR(d.dL, 32.0 * 9.81 * 0.0998334166468 + 2.0, 1e-9);
  EXPECT_NEAR(d.dL, 33.3397, 1e-4);
}

TEST(NonlinearDynamics, CentroidalMomentumShiftsRate) {
  const AlipParams p{32.0, 9.81};
  const auto d = nonlinear_dynamics({0.0, 10.0}, 1.0, 2.0, 0.0, p);
  EXPECT_DOUBLE_EQ(d.dtheta_c, 8.0 / 32.0);
}

TEST(NonlinearDynamics, RejectsNonPositiveLength) {
  const AlipParams p;
  EXPECT_THROW(nonlinear_dynamics({0.0, 0.0}, 0.0, 0.0, 0.0, p), DomainError);
  EXPECT_THROW(nonlinear_dynamics({0.0, 0.0}, -1.0, 0.0, 0.0, p), DomainError);
  EXPECT_THROW(linearized_dynamics({0.0, 0.0}, 0.0, 0.0, p), DomainError);
}

TEST(NonlinearDynamics, RejectsNonFiniteState) {
  const AlipParams p;
  EXPECT_THROW(nonlinear_dynamics({NAN, 0.0}, 1.0, 0.0, 0.0, p), DomainError);
  EXPECT_THROW(linearized_dynamics({0.0, INFINITY}, 1.0, 0.0, p), DomainError);
}

TEST(NonlinearDynamics, OddSymmetry) {
  const AlipParams p;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const AlipState s{0.3 * u(rng), 20.0 * u(rng)};
    const double tau = 23.0 * u(rng);
    const double r = 0.8 + 0.2 * u(rng);
    const auto a = nonlinear_dynamics(s, r, 0.0, tau, p);
    const auto b = nonlinear_dynamics({-s.theta_c, -s.L}, r, 0.0, -tau, p);
    EXPECT_EQ(a.dtheta_c, -b.dtheta_c);
    EXPECT_EQ(a.dL, -b.dL);
  }
}

TEST(LinearizedDynamics, Examples) {
  const AlipParams p{32.0, 9.81};
  const auto eq = linearized_dynamics({0.0, 0.0}, 1.0, 0.0, p);
  EXPECT_EQ(eq.dtheta_c, 0.0);
  EXPECT_EQ(eq.dL, 0.0);
  const auto d = linearized_dynamics({0.1, 5.0}, 1.0, 2.0, p);
  EXPECT_NEAR(d.dtheta_c, 0.15625, 1e-12);
  EXPECT_NEAR(d.dL, 33.392, 1e-12);
}

TEST(LinearizedDynamics, SmallAngleBound) {
  const AlipParams p;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double th = 0.21 * u(rng);
    const double r = 0.9 + 0.1 * u(rng);
    const AlipState s{th, 10.0 * u(rng)};
    const auto nl = nonlinear_dynamics(s, r, 0.0, 0.0, p);
    const auto li = linearized_dynamics(s, r, 0.0, p);
    const double bound = p.mass * p.gravity * r * (std::abs(th) - std::sin(std::abs(th)));
    EXPECT_LE(std::abs(nl.dL - li.dL), bound + 1e-12);
    EXPECT_DOUBLE_EQ(nl.dtheta_c, li.dtheta_c);
  }
  const auto nl = nonlinear_dynamics({0.13, 3.0}, 1.0, 0.0, 0.0, p);
  const auto li = linearized_dynamics({0.13, 3.0}, 1.0, 0.0, p);
  EXPECT_LE(std::abs(nl.dL - li.dL), p.mass * p.gravity * (0.13 - std::sin(0.13)) + 1e-12);
}

TEST(Wedge, HandValuesAndAntisymmetry) {
  EXPECT_EQ(wedge({1.0, 0.0}, {1.0, 0.0}), 0.0);
  EXPECT_EQ(wedge({0.4, -1.3}, {0.4, -1.3}), 0.0);
  EXPECT_NEAR(wedge({0.3, 0.17}, {0.5, 0.2}), 0.025, 1e-15);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const PlanarVec a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    const double s = u(rng);
    EXPECT_DOUBLE_EQ(wedge(a, b), -wedge(b, a));
    EXPECT_NEAR(wedge(a + s * c, b), wedge(a, b) + s * wedge(c, b), 1e-12);
  }
}

TEST(ImpactTransfer, Examples) {
  const AlipParams p{32.0, 9.81};
  EXPECT_NEAR(impact_transfer(6.0, {0.5, 0.2}, {0.3, 0.17}, p), 5.2, 1e-12);
  EXPECT_EQ(impact_transfer(6.0, {0.0, 0.0}, {0.3, 0.17}, p), 6.0);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  for (int i = 0; i < 100; ++i) {
    const double L = u(rng);
    EXPECT_EQ(impact_transfer(L, {u(rng), u(rng)}, {0.0, 0.0}, p), L);
  }
}

TEST(ImpactTransfer, MatchesMomentumAboutNewContact) {
  // Momentum of a point mass about a contact c is m * wedge(p - c, v).
  const AlipParams p{32.0, 9.81};
  const PlanarVec com{0.12, 0.85}, v{0.7, 0.15}, step{0.28, 0.17};
  const double L_old = p.mass * wedge(com, v);
  const double L_new = p.mass * wedge(com - step, v);
  EXPECT_NEAR(impact_transfer(L_old, v, step, p), L_new, 1e-12);
}

TEST(ComVelocity, Examples) {
  const AlipParams p{32.0, 9.81};
  const auto z = com_velocity_from_state({0.0, 0.0}, 1.0, 0.0, p);
  EXPECT_EQ(z.x, 0.0);
  EXPECT_EQ(z.z, 0.0);
  const auto v = com_velocity_from_state({0.0, 32.0}, 1.0, 0.0, p);
  EXPECT_DOUBLE_EQ(v.x, 1.0);
  EXPECT_NEAR(v.z, 0.0, 1e-15);
  EXPECT_THROW(com_velocity_from_state({0.0, 0.0}, 0.0, 0.0, p), DomainError);
}

TEST(ComVelocity, MomentumRoundTrip) {
  const AlipParams p{32.0, 9.81};
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const AlipState s{0.3 * u(rng), 25.0 * u(rng)};
    const double r = 0.85 + 0.1 * u(rng);
    const double dr = 0.5 * u(rng);
    const PlanarVec pos = com_position(s, r);
    const PlanarVec vel = com_velocity_from_state(s, r, dr, p);
    EXPECT_NEAR(p.mass * wedge(pos, vel), s.L, 1e-12 * (1.0 + std::abs(s.L)));
  }
}

TEST(ComVelocity, MatchesFiniteDifferenceOfPosition) {
  const AlipParams p{32.0, 9.81};
  const AlipState s{0.07, 12.0};
  const double r = 0.9, dr = 0.3, h = 1e-6;
  const double dth = s.L / (p.mass * r * r);
  const PlanarVec a = com_position({s.theta_c - h * dth, 0.0}, r - h * dr);
  const PlanarVec b = com_position({s.theta_c + h * dth, 0.0}, r + h * dr);
  const PlanarVec v = com_velocity_from_state(s, r, dr, p);
  EXPECT_NEAR(v.x, (b.x - a.x) / (2 * h), 1e-8);
  EXPECT_NEAR(v.z, (b.z - a.z) / (2 * h), 1e-8);
}

TEST(AlipParams, Validation) {
  EXPECT_NO_THROW((AlipParams{32.0, 9.81}.validate()));
  EXPECT_THROW((AlipParams{0.0, 9.81}.validate()), ParameterError);
  EXPECT_THROW((AlipParams{32.0, -1.0}.validate()), ParameterError);
  EXPECT_THROW((AlipParams{NAN, 9.81}.validate()), ParameterError);
}
