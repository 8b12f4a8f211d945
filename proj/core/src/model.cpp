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

#include "alip/model.hpp"

#include <cmath>
#include <sstream>

#include "alip/errors.hpp"

namespace alip {
namespace {

void require_finite_state(AlipState s, const char* op) {
  if (!std::isfinite(s.theta_c) || !std::isfinite(s.L)) {
    std::ostringstream os;
    os << op << ": non-finite state (theta_c=" << s.theta_c << ", L=" << s.L << ")";
    throw DomainError(os.str());
  }
}

void require_positive_length(double r_c, const char* op) {
  if (!(r_c > 0.0) || !std::isfinite(r_c)) {
    std::ostringstream os;
    os << op << ": pendulum length must be positive, got " << r_c;
    throw DomainError(os.str());
  }
}

}  // namespace

void AlipParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw ParameterError("AlipParams: mass must be positive");
  }
  if (!(gravity > 0.0) || !std::isfinite(gravity)) {
    throw ParameterError("AlipParams: gravity must be positive");
  }
}

double com_angle(PlanarVec p) {
  if (!(p.z > 0.0) || !std::isfinite(p.x)) {
    throw DomainError("com_angle: CoM must lie strictly above the contact (z > 0)");
  }
  return std::atan(p.x / p.z);
}

double pendulum_length(PlanarVec p) {
  const double r = std::hypot(p.x, p.z);
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw DomainError("pendulum_length: zero or non-finite CoM offset");
  }
  return r;
}

double wedge(PlanarVec a, PlanarVec b) noexcept { return a.z * b.x - a.x * b.z; }

AlipDerivative nonlinear_dynamics(AlipState s, double r_c, double L_c, double tau,
                                  const AlipParams& p) {
  require_finite_state(s, "nonlinear_dynamics");
  require_positive_length(r_c, "nonlinear_dynamics");
  const double m = p.mass;
  return {(s.L - L_c) / (m * r_c * r_c), m * p.gravity * r_c * std::sin(s.theta_c) + tau};
}

AlipDerivative linearized_dynamics(AlipState s, double r_c, double tau, const AlipParams& p) {
  require_finite_state(s, "linearized_dynamics");
  require_positive_length(r_c, "linearized_dynamics");
  const double m = p.mass;
  return {s.L / (m * r_c * r_c), m * p.gravity * r_c * s.theta_c + tau};
}

double impact_transfer(double L_minus, PlanarVec v_com, PlanarVec step_vector,
                       const AlipParams& p) {
  return L_minus - p.mass * wedge(step_vector, v_com);
}

PlanarVec com_position(AlipState s, double r_c) {
  return {r_c * std::sin(s.theta_c), r_c * std::cos(s.theta_c)};
}

PlanarVec com_velocity_from_state(AlipState s, double r_c, double dr_c, const AlipParams& p) {
  require_finite_state(s, "com_velocity_from_state");
  require_positive_length(r_c, "com_velocity_from_state");
  const double dtheta = s.L / (p.mass * r_c * r_c);
  const double sn = std::sin(s.theta_c);
  const double cs = std::cos(s.theta_c);
  return {dr_c * sn + r_c * dtheta * cs, dr_c * cs - r_c * dtheta * sn};
}

}  // namespace alip
