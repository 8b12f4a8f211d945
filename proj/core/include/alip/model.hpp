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

#pragma once

namespace alip {

/// Lumped point-mass parameters of the pendulum.
struct AlipParams {
  double mass = 32.0;     // kg
  double gravity = 9.81;  // m/s^2

  /// Throws ParameterError unless mass and gravity are positive and finite.
  void validate() const;
};

/// CoM angle about the stance contact and angular momentum about that
/// contact. Positive theta_c puts the CoM ahead of the foot (+x).
struct AlipState {
  double theta_c = 0.0;  // rad
  double L = 0.0;        // kg m^2 / s

  friend bool operator==(const AlipState&, const AlipState&) = default;
};

/// Sagittal-plane vector, x forward and z up.
struct PlanarVec {
  double x = 0.0;
  double z = 0.0;

  friend PlanarVec operator+(PlanarVec a, PlanarVec b) { return {a.x + b.x, a.z + b.z}; }
  friend PlanarVec operator-(PlanarVec a, PlanarVec b) { return {a.x - b.x, a.z - b.z}; }
  friend PlanarVec operator*(double s, PlanarVec a) { return {s * a.x, s * a.z}; }
  friend bool operator==(const PlanarVec&, const PlanarVec&) = default;
};

struct AlipDerivative {
  double dtheta_c = 0.0;  // rad/s
  double dL = 0.0;        // kg m^2 / s^2
};

/// Angle of the CoM measured from the vertical through the contact.
/// Requires p.z > 0.
double com_angle(PlanarVec p);

/// Distance from contact to CoM. Requires p != 0.
double pendulum_length(PlanarVec p);

/// y-component of (a.x, 0, a.z) x (b.x, 0, b.z), i.e. a.z*b.x - a.x*b.z.
double wedge(PlanarVec a, PlanarVec b) noexcept;

/// Length-varying pendulum with angular momentum L_c about the CoM:
///   dtheta_c = (L - L_c) / (m r_c^2),  dL = m g r_c sin(theta_c) + tau.
AlipDerivative nonlinear_dynamics(AlipState s, double r_c, double L_c, double tau,
                                  const AlipParams& p);

/// Small-angle form with L_c dropped: dL = m g r_c theta_c + tau.
AlipDerivative linearized_dynamics(AlipState s, double r_c, double tau, const AlipParams& p);

/// Momentum about the new contact after a foot exchange. step_vector points
/// from the old contact to the new one; v_com is continuous across impact.
double impact_transfer(double L_minus, PlanarVec v_com, PlanarVec step_vector,
                       const AlipParams& p);

/// CoM position (r_c sin theta_c, r_c cos theta_c) relative to the contact.
PlanarVec com_position(AlipState s, double r_c);

/// Cartesian CoM velocity implied by the polar state and leg-length rate,
/// with L_c neglected.
PlanarVec com_velocity_from_state(AlipState s, double r_c, double dr_c, const AlipParams& p);

}  // namespace alip
