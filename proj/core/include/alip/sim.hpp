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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "alip/model.hpp"
#include "alip/mpc.hpp"
#include "alip/orbit.hpp"

namespace alip {

enum class PlantModel { nonlinear, linearized };

/// One classical Runge-Kutta step with tau held over [t, t + dt] and r_c
/// sampled at the stage times. L_c is ignored by the linearized model.
AlipState rk4_step(AlipState s, const std::function<double(double)>& r_c_of_t, double L_c,
                   double tau, double t, double dt, const AlipParams& p,
                   PlantModel model = PlantModel::nonlinear);

struct PerturbationEvent {
  double t_start = 0.0;
  double duration = 0.05;
  double torque_scale = 0.8;

  bool active(double t) const noexcept;
  void validate() const;
};

struct SimConfig {
  double dt_integration = 1e-3;
  double T = 0.4;
  int num_steps = 5;
  ControllerConfig controller;
  std::vector<PerturbationEvent> perturbations;
  double fall_threshold = 0.5;
  std::uint64_t seed = 0;
  /// Added to the orbit's initial state.
  AlipState initial_offset;
  /// Half-widths of a uniform draw (from seed) added on top of initial_offset.
  AlipState initial_jitter;
  double L_c = 0.0;
  PlantModel plant = PlantModel::nonlinear;

  void validate(const NominalOrbit& orbit) const;
};

struct SimRow {
  double t = 0.0;
  double theta_c = 0.0;
  double L = 0.0;
  double theta_des = 0.0;
  double L_des = 0.0;
  double tau_commanded = 0.0;
  double tau_applied = 0.0;
  double r_c = 0.0;
  int step_index = 0;
  bool impact = false;
  bool perturb_active = false;
  bool fell = false;
  SolveStatus qp_status = SolveStatus::none;
};

struct ImpactRecord {
  int step_index = 0;
  double t = 0.0;
  AlipState pre;
  AlipState post;
  double r_c = 0.0;
  double dr_c = 0.0;
  PlanarVec step_vector;
};

/// Rows hold the state at t and the torque over [t, t + dt), except impact
/// rows, which hold the pre-impact state at the step boundary and the torque
/// of the interval that ended there.
struct SimLog {
  std::vector<SimRow> rows;
  std::vector<ImpactRecord> impacts;
  bool fell = false;
  bool numerical_failure = false;
  std::string failure_message;
};

SimLog run_scenario(const SimConfig& cfg, const NominalOrbit& orbit, const StairGeometry& terrain);

struct ImpactDeviation {
  int step_index = 0;
  double theta = 0.0;
  double L = 0.0;
};

struct Metrics {
  int steps_completed = 0;
  bool fell = false;
  double rms_theta_error = 0.0;
  double rms_L_error = 0.0;
  std::vector<double> mean_abs_torque;  // per step
  double peak_abs_torque = 0.0;
  std::vector<ImpactDeviation> impact_deviations;
};

Metrics metrics(const SimLog& log);

void write_csv(const SimLog& log, std::ostream& os);
void write_csv(const SimLog& log, const std::filesystem::path& path);
/// Reads rows back; impact records are not part of the CSV.
SimLog read_csv(std::istream& is, const std::string& source = "<csv>");
SimLog read_csv(const std::filesystem::path& path);

std::string serialize_metrics(const Metrics& m);

SolveStatus parse_solve_status(std::string_view s);

}  // namespace alip
