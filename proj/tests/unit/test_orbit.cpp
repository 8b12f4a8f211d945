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
#include <filesystem>

#include "alip/errors.hpp"
#include "alip/orbit.hpp"

using namespace alip;

namespace {

const NominalOrbit& default_orbit() {
  static const NominalOrbit o =
      synthesize_orbit(StairGeometry{0.28, 0.17, 5}, AlipParams{32.0, 9.81}, 0.4, 0.86, -0.2);
  return o;
}

struct Cartesian {
  double x, z;
};

Cartesian com_at(const NominalOrbit& o, double t) {
  const double r = o.r_c_curve.eval(t), th = o.theta_curve.eval(t);
  return {r * std::sin(th), r * std::cos(th)};
}

// One-sided finite-difference velocity of the CoM path at the step end.
Cartesian com_velocity_fd(const NominalOrbit& o, double t, double h) {
  const Cartesian a = com_at(o, t - 2 * h), b = com_at(o, t - h), c = com_at(o, t);
  return {(3 * c.x - 4 * b.x + a.x) / (2 * h), (3 * c.z - 4 * b.z + a.z) / (2 * h)};
}

}  // namespace

TEST(Synthesis, DefaultStairsMeetsInvariants) {
  const NominalOrbit& o = default_orbit();
  EXPECT_LE(o.residual.max_abs(), 1e-3);
  EXPECT_LE(periodicity_residual(o).max_abs(), 1e-3);
  double lo = 1e9, hi = -1e9;
  for (int i = 0; i <= 400; ++i) {
    const double t = o.T * i / 400.0;
    lo = std::min(lo, o.theta_curve.eval(t));
    hi = std::max(hi, o.theta_curve.eval(t));
    EXPECT_GT(o.r_c_curve.eval(t), 0.0);
  }
  EXPECT_GE(lo, -0.21);
  EXPECT_LE(hi, 0.13);
  EXPECT_NEAR(o.r_c_curve.eval(0.2), 0.86, 1e-9);
  EXPECT_EQ(o.theta_curve.eval(0.0), -0.2);
}

TEST(Synthesis, CoMAdvancesByOneStep) {
  const NominalOrbit& o = default_orbit();
  const Cartesian a = com_at(o, 0.0), b = com_at(o, o.T);
  // CoM relative to the old contact at T minus CoM relative to the new
  // contact at 0 must equal the step.
  EXPECT_NEAR(b.x - a.x, 0.28, 1e-6);
  EXPECT_NEAR(b.z - a.z, 0.17, 1e-6);
}

TEST(Synthesis, IndependentImpactReplayClosesTheOrbit) {
  const NominalOrbit& o = default_orbit();
  const double m = o.params.mass;
  const Cartesian p = com_at(o, o.T);
  const Cartesian v = com_velocity_fd(o, o.T, 1e-5);
  // Momentum about the old contact, then about the new one.
  const double L_old = m * (p.z * v.x - p.x * v.z);
  EXPECT_NEAR(L_old, nominal_L(o, o.T), 1e-4);
  const double qx = p.x - 0.28, qz = p.z - 0.17;
  const double L_new = m * (qz * v.x - qx * v.z);
  EXPECT_NEAR(std::atan2(qx, qz), o.theta_curve.eval(0.0), 1e-9);
  EXPECT_NEAR(L_new, nominal_L(o, 0.0), 1e-4);
}

TEST(Synthesis, FeedforwardTorqueReproducesOneStep) {
  const NominalOrbit& o = default_orbit();
  const double m = o.params.mass, g = o.params.gravity;
  const int n = 4000;
  const double h = o.T / n;
  double th = o.theta_curve.eval(0.0), L = nominal_L(o, 0.0);
  const auto f = [&](double t, double a, double b, double& da, double& db) {
    const double r = o.r_c_curve.eval(std::min(t, o.T));
    da = b / (m * r * r);
    db = m * g * r * std::sin(a) + feedforward_torque(o, std::min(t, o.T));
  };
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    double a1, b1, a2, b2, a3, b3, a4, b4;
    f(t, th, L, a1, b1);
    f(t + h / 2, th + h / 2 * a1, L + h / 2 * b1, a2, b2);
    f(t + h / 2, th + h / 2 * a2, L + h / 2 * b2, a3, b3);
    f(t + h, th + h * a3, L + h * b3, a4, b4);
    th += h / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
    L += h / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
  }
  EXPECT_NEAR(th, o.theta_curve.eval(o.T), 1e-8);
  EXPECT_NEAR(L, nominal_L(o, o.T), 1e-6);
  EXPECT_LT(max_feedforward_torque(o), 0.1);
}

TEST(Synthesis, FlatGroundKeepsHeight) {
  const NominalOrbit o =
      synthesize_orbit(StairGeometry{0.28, 0.0, 5}, AlipParams{}, 0.4, 0.86, -0.2);
  const Cartesian a = com_at(o, 0.0), b = com_at(o, o.T);
  EXPECT_NEAR(b.z, a.z, 1e-6);
  EXPECT_NEAR(b.x - a.x, 0.28, 1e-6);
  EXPECT_LE(o.residual.max_abs(), 1e-3);
}

TEST(Synthesis, DescendingStairs) {
  const NominalOrbit o =
      synthesize_orbit(StairGeometry{0.3, -0.1, 5}, AlipParams{}, 0.4, 0.9, -0.2);
  const Cartesian a = com_at(o, 0.0), b = com_at(o, o.T);
  EXPECT_NEAR(b.z - a.z, -0.1, 1e-6);
  EXPECT_LE(o.residual.max_abs(), 1e-3);
}

TEST(Synthesis, SteppingInPlace) {
  const NominalOrbit o = synthesize_orbit(StairGeometry{0.0, 0.0, 5}, AlipParams{}, 0.4, 0.86, 0.0);
  EXPECT_LE(o.residual.max_abs(), 1e-9);
  EXPECT_NEAR(nominal_L(o, 0.0), -nominal_L(o, o.T), 1e-12);
}

TEST(Synthesis, Errors) {
  const AlipParams p;
  EXPECT_THROW(synthesize_orbit({0.1, 1.0, 5}, p, 0.4, 0.86, -0.2), SynthesisError);
  EXPECT_THROW(synthesize_orbit({0.1, 1.0, 5}, p, 0.4, 1.2, -0.2), SynthesisError);
  EXPECT_THROW(synthesize_orbit({0.28, 0.17, 5}, p, 0.0, 0.86, -0.2), SynthesisError);
  EXPECT_THROW(synthesize_orbit({0.28, 0.17, 5}, p, 0.4, 0.86, -0.35), SynthesisError);
  EXPECT_THROW(synthesize_orbit({0.28, 0.17, 5}, p, 0.4, 0.1, -0.2), SynthesisError);
}

TEST(NominalL, HandValue) {
  const NominalOrbit o{BezierCurve({1, 1, 1, 1, 1}, 1.0), BezierCurve({0.0, 0.0625, 0.125, 0.1875, 0.25}, 1.0),
                       1.0, {0.28, 0.17}, AlipParams{32.0, 9.81}, {}};
  EXPECT_NEAR(nominal_L(o, 0.3), 8.0, 1e-12);
  const NominalOrbit flat{BezierCurve({1, 1, 1, 1, 1}, 1.0), BezierCurve({0.1, 0.1, 0.1, 0.1, 0.1}, 1.0),
                          1.0, {0.28, 0.17}, AlipParams{}, {}};
  EXPECT_NEAR(nominal_L(flat, 0.5), 0.0, 1e-14);
  EXPECT_THROW(nominal_L(flat, 1.5), RangeError);
}

TEST(NominalL, IntegratesBackToAngle) {
  const NominalOrbit& o = default_orbit();
  const double m = o.params.mass;
  const int n = 2000;
  const double h = o.T / n;
  double th = o.theta_curve.eval(0.0);
  double worst = 0.0;
  const auto rate = [&](double t) {
    const double r = o.r_c_curve.eval(t);
    return nominal_L(o, t) / (m * r * r);
  };
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    th += h / 6 * (rate(t) + 4 * rate(t + h / 2) + rate(t + h));
    worst = std::max(worst, std::abs(th - o.theta_curve.eval(t + h)));
  }
  EXPECT_LT(worst, 1e-4);
}

TEST(OrbitSample, WrapsModuloPeriod) {
  const NominalOrbit& o = default_orbit();
  const OrbitSample a = orbit_sample(o, 0.0), b = orbit_sample(o, o.T);
  EXPECT_EQ(a.state, b.state);
  const OrbitSample c = orbit_sample(o, 2.5 * o.T), d = orbit_sample(o, 0.5 * o.T);
  EXPECT_NEAR(c.state.theta_c, d.state.theta_c, 1e-12);
  EXPECT_NEAR(c.state.L, d.state.L, 1e-10);
  const NominalOrbit& q = o;
  EXPECT_EQ(orbit_sample(q, 0.13).state, orbit_sample(q, 0.13).state);
  const OrbitSample pre = orbit_sample_at_phase(o, o.T);
  const OrbitSample near = orbit_sample(o, o.T - 1e-9);
  EXPECT_NEAR(pre.state.theta_c, near.state.theta_c, 1e-8);
  EXPECT_EQ(pre.state.theta_c, o.theta_curve.control_points()[4]);
}

TEST(OrbitIo, RoundTripIsExact) {
  const NominalOrbit& o = default_orbit();
  const NominalOrbit back = parse_orbit(serialize_orbit(o));
  EXPECT_EQ(back.r_c_curve, o.r_c_curve);
  EXPECT_EQ(back.theta_curve, o.theta_curve);
  EXPECT_EQ(back.T, o.T);
  EXPECT_EQ(back.step_vector, o.step_vector);
  EXPECT_EQ(back.params.mass, o.params.mass);
  const auto path = std::filesystem::temp_directory_path() / "alip_orbit_roundtrip.orbit";
  save_orbit(o, path);
  EXPECT_EQ(load_orbit(path).theta_curve, o.theta_curve);
  std::filesystem::remove(path);
}

TEST(OrbitIo, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_orbit("format = alip-orbit\nversion = 1\n"), ConfigError);
  std::string text = serialize_orbit(default_orbit());
  EXPECT_THROW(parse_orbit(text + "extra = 1\n"), ConfigError);
  const auto pos = text.find("version = 1");
  text.replace(pos, 11, "version = 9");
  EXPECT_THROW(parse_orbit(text), ConfigError);
}

TEST(ValidateOrbit, RejectsBrokenOrbit) {
  NominalOrbit o = default_orbit();
  auto th = o.theta_curve.control_points();
  th[4] += 0.05;
  o.theta_curve = BezierCurve(th, o.T);
  EXPECT_THROW(validate_orbit(o, 1e-3), SynthesisError);
  EXPECT_NO_THROW(validate_orbit(default_orbit(), 1e-3));
}
