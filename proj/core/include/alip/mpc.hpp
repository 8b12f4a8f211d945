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

#include <Eigen/Dense>
#include <string_view>
#include <vector>

#include "alip/orbit.hpp"
#include "alip/prediction.hpp"
#include "alip/qp.hpp"

namespace alip {

/// Per-sample weights of the condensed cost. Q[j] weighs the deviation of
/// (theta_c, L) at sample j+1; H[j] the torque u_j.
struct WeightSchedule {
  std::vector<double> H;
  std::vector<Eigen::Vector2d> Q;
  double terminal_multiplier = 1.0;

  /// Positive entries, matching lengths, terminal Q maximal.
  void validate() const;
};

/// How weights are laid out along a horizon. State weights grow
/// geometrically with the sample's phase in the step; impact samples and
/// the final horizon sample are further multiplied by terminal_multiplier.
struct WeightPolicy {
  double H = 1.0;
  double Q_theta = 2e6;
  double Q_L = 2.0;
  double growth = 1.1;
  double terminal_multiplier = 10.0;
};

WeightSchedule make_weight_schedule(const WeightPolicy& policy, const NominalOrbit& orbit,
                                    double t0, int N, double dt);

enum class TerminalMode { soft_tracking, hard_terminal };
enum class HorizonMode { next_impact, fixed };

struct TorqueBounds {
  double lower = -23.0;
  double upper = 23.0;
};

/// Builds the condensed QP in the torque sequence. Soft tracking penalizes
/// every stage deviation; hard terminal additionally pins the final
/// predicted state to the orbit.
QpProblem condense(const HorizonPrediction& pred, const AlipState& x_k,
                   const std::vector<Eigen::Vector2d>& targets, const WeightSchedule& w,
                   const TorqueBounds& bounds, TerminalMode mode);

/// Same, with targets read from the orbit starting at t0.
QpProblem condense(const HorizonPrediction& pred, const AlipState& x_k, const NominalOrbit& orbit,
                   double t0, const WeightSchedule& w, const TorqueBounds& bounds,
                   TerminalMode mode);

struct ControllerConfig {
  bool enabled = true;
  TerminalMode mode = TerminalMode::soft_tracking;
  HorizonMode horizon = HorizonMode::next_impact;
  /// next_impact: the horizon ends at the n-th upcoming impact.
  int horizon_impacts = 2;
  /// fixed: constant number of samples.
  int horizon_samples = 40;
  double dt = 0.01;
  double update_period = 0.01;
  /// Seconds between QP solves. In between, the stored torque sequence is
  /// replayed sample by sample. Non-positive solves at every update.
  double resolve_period = 0.0;
  double torque_limit = 23.0;
  WeightPolicy weights;
  int max_iterations = 500;
  bool compensate_orbit_defects = true;
  bool warm_start = true;

  void validate() const;
};

enum class SolveStatus { none, optimal, relaxed, max_iterations, failed, disabled, replayed };
std::string_view to_string(SolveStatus status) noexcept;

struct MpcDiagnostics {
  SolveStatus status = SolveStatus::none;
  int horizon = 0;
  int iterations = 0;
  double objective = 0.0;
  double first_torque = 0.0;
};

/// Receding-horizon ankle-torque controller. Holds the warm start and the
/// last applied torque; one instance per simulation.
class MpcController {
 public:
  MpcController(ControllerConfig config, AlipParams params);

  /// Solves the horizon starting at absolute time t and returns the first
  /// torque, clamped to the torque limit.
  double step(const AlipState& x, double t, const NominalOrbit& orbit);

  const MpcDiagnostics& diagnostics() const noexcept { return diag_; }
  const ControllerConfig& config() const noexcept { return config_; }
  void reset();

  /// Horizon length in samples used at time t.
  int horizon_length(const NominalOrbit& orbit, double t) const;

 private:
  ControllerConfig config_;
  AlipParams params_;
  Eigen::VectorXd previous_;
  double solved_at_ = 0.0;
  double last_torque_ = 0.0;
  MpcDiagnostics diag_;
};

}  // namespace alip
