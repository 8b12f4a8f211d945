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

#include "alip/prediction.hpp"

#include <cmath>
#include <sstream>

#include "alip/errors.hpp"

namespace alip {

DiscreteStep discretize(double r_c, double dt, const AlipParams& p) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("discretize: dt must be positive");
  if (!(r_c > 0.0)) throw DomainError("discretize: pendulum length must be positive");
  DiscreteStep step;
  step.A << 1.0, dt / (p.mass * r_c * r_c), dt * p.mass * p.gravity * r_c, 1.0;
  step.b << 0.0, dt;
  step.dt = dt;
  return step;
}

DiscreteStep discretize_at(const NominalOrbit& orbit, double t, double dt, const AlipParams& p) {
  if (!(dt > 0.0)) throw ParameterError("discretize_at: dt must be positive");
  return discretize(orbit.r_c_curve.eval(orbit_phase(orbit, t)), dt, p);
}

Eigen::Vector2d HorizonPrediction::predict(const Eigen::Vector2d& x,
                                           const Eigen::VectorXd& u) const {
  return S * x + Gamma * u + offset;
}

Eigen::Vector2d HorizonPrediction::predict_stage(int j, const Eigen::Vector2d& x,
                                                 const Eigen::VectorXd& u) const {
  const StageMap& st = stages.at(static_cast<std::size_t>(j));
  return st.S * x + st.Gamma * u.head(j + 1) + st.offset;
}

HorizonPrediction build_prediction(std::span<const DiscreteStep> steps,
                                   std::span<const Eigen::Vector2d> affine) {
  if (steps.empty()) throw ParameterError("build_prediction: horizon must have N >= 1");
  if (!affine.empty() && affine.size() != steps.size()) {
    throw ConstructionError("build_prediction: affine terms must match the number of steps");
  }
  const int N = static_cast<int>(steps.size());
  HorizonPrediction pred;
  pred.N = N;
  pred.dt = steps.front().dt;
  pred.stages.reserve(steps.size());

  Eigen::Matrix2d S = Eigen::Matrix2d::Identity();
  Matrix2xN B(2, 0);
  Eigen::Vector2d offset = Eigen::Vector2d::Zero();
  for (int j = 0; j < N; ++j) {
    const DiscreteStep& st = steps[j];
    S = st.A * S;
    Matrix2xN next(2, j + 1);
    next.leftCols(j) = st.A * B;
    next.col(j) = st.b;
    B = std::move(next);
    offset = st.A * offset;
    if (!affine.empty()) offset += affine[j];
    pred.stages.push_back({S, B, offset});
  }
  pred.S = S;
  pred.Gamma = B;
  pred.offset = offset;
  return pred;
}

namespace {

// Phase of each sample end relative to the current step, and whether an
// impact reset is applied there.
struct SampleSchedule {
  std::vector<double> start_phase;  // phase at the start of interval j
  std::vector<bool> reset_after;    // reset applied at the end of interval j
  std::vector<double> end_phase;    // phase at the end of interval j (pre-reset)
};

SampleSchedule schedule(const NominalOrbit& orbit, double t0, int N, double dt) {
  SampleSchedule s;
  s.start_phase.resize(N);
  s.end_phase.resize(N);
  s.reset_after.assign(N, false);
  const double T = orbit.T;
  const double eps = 1e-9 * dt;
  double phase = orbit_phase(orbit, t0);
  if (T - phase < eps) phase = 0.0;
  for (int j = 0; j < N; ++j) {
    s.start_phase[j] = phase;
    double end = phase + dt;
    if (end >= T - eps) {
      s.end_phase[j] = T;
      if (j + 1 < N) {
        s.reset_after[j] = true;
        end -= T;
        if (end < eps) end = 0.0;
      }
    } else {
      s.end_phase[j] = end;
    }
    phase = end;
  }
  return s;
}

Eigen::Vector2d as_vec(AlipState s) { return {s.theta_c, s.L}; }

Eigen::Vector2d impact_mapped_start(const NominalOrbit& orbit) {
  const OrbitSample end = orbit_sample_at_phase(orbit, orbit.T);
  const PlanarVec v = com_velocity_from_state(end.state, end.r_c, end.dr_c, orbit.params);
  const double L_plus = impact_transfer(end.state.L, v, orbit.step_vector, orbit.params);
  const double th_plus = com_angle(com_position(end.state, end.r_c) - orbit.step_vector);
  return {th_plus, L_plus};
}

}  // namespace

std::vector<Eigen::Vector2d> horizon_targets(const NominalOrbit& orbit, double t0, int N,
                                             double dt) {
  const SampleSchedule s = schedule(orbit, t0, N, dt);
  std::vector<Eigen::Vector2d> out;
  out.reserve(N);
  for (int j = 0; j < N; ++j) {
    const double phase = s.reset_after[j] ? 0.0 : s.end_phase[j];
    out.push_back(as_vec(orbit_sample_at_phase(orbit, phase).state));
  }
  return out;
}

HorizonPrediction build_prediction(const NominalOrbit& orbit, double t0, int N, double dt,
                                   const AlipParams& p, const PredictionOptions& options) {
  if (N < 1) throw ParameterError("build_prediction: horizon must have N >= 1");
  if (!(dt > 0.0)) throw ParameterError("build_prediction: dt must be positive");
  const double cap = options.horizon_cap > 0.0 ? options.horizon_cap : 5.0 * orbit.T;
  if (N * dt > cap * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "build_prediction: horizon " << N * dt << " s exceeds cap " << cap << " s";
    throw ParameterError(os.str());
  }

  const SampleSchedule s = schedule(orbit, t0, N, dt);
  std::vector<DiscreteStep> steps;
  std::vector<Eigen::Vector2d> affine(N, Eigen::Vector2d::Zero());
  steps.reserve(N);

  const Eigen::Vector2d reset =
      impact_mapped_start(orbit) - as_vec(orbit_sample_at_phase(orbit, orbit.T).state);
  std::vector<int> impact_stages;
  for (int j = 0; j < N; ++j) {
    steps.push_back(discretize(orbit.r_c_curve.eval(s.start_phase[j]), dt, p));
    if (options.compensate_orbit_defects) {
      const Eigen::Vector2d from = as_vec(orbit_sample_at_phase(orbit, s.start_phase[j]).state);
      const double to_phase = s.reset_after[j] ? 0.0 : s.end_phase[j];
      const Eigen::Vector2d to = as_vec(orbit_sample_at_phase(orbit, to_phase).state);
      affine[j] = to - steps.back().A * from;
    } else if (s.reset_after[j]) {
      affine[j] = reset;
    }
    if (s.reset_after[j]) impact_stages.push_back(j);
  }

  HorizonPrediction pred = build_prediction(steps, affine);
  pred.impact_stages = impact_stages;
  pred.impact_offsets.assign(impact_stages.size(), reset);
  return pred;
}

bool rank_check(const HorizonPrediction& pred) {
  if (pred.Gamma.cols() < 2) return false;
  const Eigen::Matrix2d G = pred.Gamma * pred.Gamma.transpose();
  const double fro2 = pred.Gamma.squaredNorm();
  if (!(fro2 > 0.0)) return false;
  return G.determinant() > 1e-12 * fro2 * fro2;
}

int samples_to_impact(const NominalOrbit& orbit, double t, double dt) {
  double phase = orbit_phase(orbit, t);
  if (orbit.T - phase < 1e-9 * dt) phase = 0.0;
  const double remaining = orbit.T - phase;
  const int n = static_cast<int>(std::ceil(remaining / dt - 1e-9));
  return n < 1 ? 1 : n;
}

}  // namespace alip
