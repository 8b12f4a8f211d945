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
#include <span>
#include <vector>

#include "alip/orbit.hpp"

namespace alip {

using Matrix2xN = Eigen::Matrix<double, 2, Eigen::Dynamic>;

/// One forward-Euler step x+ = A x + b u of the linear time-varying model.
struct DiscreteStep {
  Eigen::Matrix2d A;
  Eigen::Vector2d b;
  double dt;
};

/// Euler discretization with the pendulum length frozen at r_c.
DiscreteStep discretize(double r_c, double dt, const AlipParams& p);

/// Same, with r_c taken from the orbit at absolute time t.
DiscreteStep discretize_at(const NominalOrbit& orbit, double t, double dt, const AlipParams& p);

/// Affine map from (x_k, u_k..u_{k+j}) to x_{k+j+1}.
struct StageMap {
  Eigen::Matrix2d S;
  Matrix2xN Gamma;  // 2 x (j+1)
  Eigen::Vector2d offset;
};

/// Condensed horizon: x_{k+N} = S x_k + Gamma u_seq + offset, plus the
/// same map for every intermediate sample.
struct HorizonPrediction {
  Eigen::Matrix2d S;
  Matrix2xN Gamma;
  Eigen::Vector2d offset;
  std::vector<StageMap> stages;  // stages[j] predicts sample j+1
  int N = 0;
  double dt = 0.0;
  /// Stage indices j after which an impact reset enters the prediction.
  std::vector<int> impact_stages;
  /// Nominal post-impact minus pre-impact state at each of those resets.
  std::vector<Eigen::Vector2d> impact_offsets;

  Eigen::Vector2d predict(const Eigen::Vector2d& x, const Eigen::VectorXd& u) const;
  Eigen::Vector2d predict_stage(int j, const Eigen::Vector2d& x, const Eigen::VectorXd& u) const;
};

/// Unrolls x_{j+1} = A_j x_j + b_j u_j + w_j. `affine` is either empty
/// (all w_j = 0) or has one entry per step.
HorizonPrediction build_prediction(std::span<const DiscreteStep> steps,
                                   std::span<const Eigen::Vector2d> affine = {});

struct PredictionOptions {
  /// Longest horizon accepted, in seconds. Non-positive means 5 T.
  double horizon_cap = 0.0;
  /// Add w_j = x_des(t_{j+1}) - A_j x_des(t_j) so that the nominal orbit is
  /// an exact zero-input solution of the prediction model.
  bool compensate_orbit_defects = false;
};

/// Horizon of N samples of size dt starting at absolute time t0 along the
/// orbit. Crossing a step boundary before the final sample adds the nominal
/// impact reset at that sample. A horizon ending exactly on a boundary
/// predicts the pre-impact state.
HorizonPrediction build_prediction(const NominalOrbit& orbit, double t0, int N, double dt,
                                   const AlipParams& p, const PredictionOptions& options = {});

/// Nominal desired state at the end of each horizon sample, matching the
/// reset convention of build_prediction (pre-impact only at the final sample).
std::vector<Eigen::Vector2d> horizon_targets(const NominalOrbit& orbit, double t0, int N,
                                             double dt);

/// det(Gamma Gamma^T) > 1e-12 ||Gamma||_F^4.
bool rank_check(const HorizonPrediction& pred);

/// Number of dt-samples from t to the next step boundary (at least 1).
int samples_to_impact(const NominalOrbit& orbit, double t, double dt);

}  // namespace alip
