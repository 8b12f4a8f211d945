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

#include <filesystem>
#include <string>

#include "alip/bezier.hpp"
#include "alip/model.hpp"

namespace alip {

/// Per-step foothold displacement. A negative rise descends.
struct StairGeometry {
  double run = 0.28;   // m
  double rise = 0.17;  // m
  int num_steps = 5;

  PlanarVec step_vector() const noexcept { return {run, rise}; }
  void validate() const;
};

/// Periodicity mismatch between the impact-mapped end of a step and the
/// start of the next, in (rad, kg m^2/s).
struct PeriodicityResidual {
  double theta = 0.0;
  double L = 0.0;

  double max_abs() const noexcept;
};

/// Periodic reference for one step. Both curves run over [0, T]; the
/// desired momentum is L_des = m r_c^2 dtheta_des/dt.
struct NominalOrbit {
  BezierCurve r_c_curve;
  BezierCurve theta_curve;
  double T;
  PlanarVec step_vector;
  AlipParams params;
  PeriodicityResidual residual;
};

struct OrbitSample {
  AlipState state;
  double r_c;
  double dr_c;
};

/// Desired momentum at phase t in [0, T]; RangeError outside.
double nominal_L(const NominalOrbit& orbit, double t);

/// Phase of absolute time t within the step, in [0, T).
double orbit_phase(const NominalOrbit& orbit, double t);

/// Sample at absolute time t >= 0, wrapped modulo T. A multiple of T maps to
/// the start of a step (post-impact).
OrbitSample orbit_sample(const NominalOrbit& orbit, double t);

/// Sample at phase in [0, T] without wrapping; phase == T is the pre-impact end.
OrbitSample orbit_sample_at_phase(const NominalOrbit& orbit, double phase);

/// Ankle torque the orbit needs to be an exact solution of the nonlinear
/// model: dL_des/dt - m g r_c sin(theta_des).
double feedforward_torque(const NominalOrbit& orbit, double phase);

/// Max |feedforward_torque| on a uniform grid of `samples` phases.
double max_feedforward_torque(const NominalOrbit& orbit, int samples = 401);

/// Applies the impact map to the orbit end and compares with its start.
PeriodicityResidual periodicity_residual(const NominalOrbit& orbit);

struct SynthesisOptions {
  /// Allowed periodicity residual per component.
  double tolerance = 1e-3;
  /// Absolute bound on the orbit CoM angle.
  double theta_limit = 0.3;
  int max_iterations = 200;
  /// Collocation phases for the torque residual.
  int collocation_points = 81;
};

/// Builds a near-passive periodic orbit: the CoM advances by exactly the
/// stair step per period, the length passes through r_apex at mid-step, the
/// post-impact state maps back onto the start, and the interior control
/// points minimize the ankle torque the orbit would need. Throws
/// SynthesisError when the geometry cannot be met within the angle limit.
NominalOrbit synthesize_orbit(const StairGeometry& geom, const AlipParams& params, double T,
                              double r_apex, double theta_start,
                              const SynthesisOptions& options = {});

/// Throws SynthesisError if the orbit violates its invariants (positive
/// length, angle range, residual within tolerance).
void validate_orbit(const NominalOrbit& orbit, double tolerance, double theta_limit = 0.3);

std::string serialize_orbit(const NominalOrbit& orbit);
NominalOrbit parse_orbit(const std::string& text, const std::string& source = "<orbit>");
void save_orbit(const NominalOrbit& orbit, const std::filesystem::path& path);
NominalOrbit load_orbit(const std::filesystem::path& path);

}  // namespace alip
