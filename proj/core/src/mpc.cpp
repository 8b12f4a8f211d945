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

#include "alip/mpc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "alip/errors.hpp"

namespace alip {

void WeightSchedule::validate() const {
  if (H.empty() || H.size() != Q.size()) {
    throw ConstructionError("WeightSchedule: H and Q must be non-empty and of equal length");
  }
  for (std::size_t j = 0; j < H.size(); ++j) {
    if (!(H[j] > 0.0) || !(Q[j].minCoeff() > 0.0) || !Q[j].allFinite() || !std::isfinite(H[j])) {
      std::ostringstream os;
      os << "WeightSchedule: non-positive weight at sample " << j;
      throw ParameterError(os.str());
    }
  }
  const Eigen::Vector2d& last = Q.back();
  for (const auto& q : Q) {
    if ((q.array() > last.array()).any()) {
      throw ParameterError("WeightSchedule: terminal state weight must be the largest");
    }
  }
}

WeightSchedule make_weight_schedule(const WeightPolicy& policy, const NominalOrbit& orbit,
                                    double t0, int N, double dt) {
  if (N < 1) throw ParameterError("make_weight_schedule: N must be >= 1");
  if (!(policy.H > 0.0) || !(policy.Q_theta > 0.0) || !(policy.Q_L > 0.0)) {
    throw ParameterError("make_weight_schedule: weights must be positive");
  }
  if (!(policy.growth >= 1.0) || !(policy.terminal_multiplier >= 1.0)) {
    throw ParameterError("make_weight_schedule: growth and terminal multiplier must be >= 1");
  }
  const double T = orbit.T;
  const double eps = 1e-9 * dt;
  const int per_step = std::max(1, static_cast<int>(std::lround(T / dt)));
  const Eigen::Vector2d base(policy.Q_theta, policy.Q_L);
  const Eigen::Vector2d peak =
      base * std::pow(policy.growth, per_step - 1) * policy.terminal_multiplier;

  double phase = orbit_phase(orbit, t0);
  if (T - phase < eps) phase = 0.0;

  WeightSchedule w;
  w.terminal_multiplier = policy.terminal_multiplier;
  w.H.assign(N, policy.H);
  w.Q.resize(N);
  for (int j = 0; j < N; ++j) {
    double end = std::fmod(phase + (j + 1) * dt, T);
    if (end < eps) end = T;
    const bool impact = T - end < eps;
    const int i = std::clamp(static_cast<int>(std::lround(end / dt)), 1, per_step);
    w.Q[j] = (impact || j + 1 == N) ? peak : Eigen::Vector2d(base * std::pow(policy.growth, i - 1));
  }
  return w;
}

QpProblem condense(const HorizonPrediction& pred, const AlipState& x_k,
                   const std::vector<Eigen::Vector2d>& targets, const WeightSchedule& w,
                   const TorqueBounds& bounds, TerminalMode mode) {
  const int N = pred.N;
  if (N < 1 || static_cast<int>(pred.stages.size()) != N || pred.Gamma.cols() != N) {
    throw ConstructionError("condense: malformed prediction");
  }
  if (static_cast<int>(targets.size()) != N || static_cast<int>(w.H.size()) != N ||
      static_cast<int>(w.Q.size()) != N) {
    std::ostringstream os;
    os << "condense: horizon has " << N << " samples but targets/weights have " << targets.size()
       << "/" << w.H.size() << "/" << w.Q.size();
    throw ConstructionError(os.str());
  }
  if (!(bounds.lower < bounds.upper)) throw ParameterError("condense: empty torque bounds");
  w.validate();

  const Eigen::Vector2d x(x_k.theta_c, x_k.L);
  QpProblem qp;
  qp.P = Eigen::MatrixXd::Zero(N, N);
  qp.q = Eigen::VectorXd::Zero(N);
  double max_q = 0.0;
  for (int j = 0; j < N; ++j) {
    const StageMap& st = pred.stages[j];
    const int n = j + 1;
    const Eigen::Matrix2d Qj = w.Q[j].asDiagonal();
    const Eigen::Vector2d free = st.S * x + st.offset - targets[j];
    qp.P.topLeftCorner(n, n).noalias() += 2.0 * st.Gamma.transpose() * Qj * st.Gamma;
    qp.q.head(n).noalias() += 2.0 * st.Gamma.transpose() * (Qj * free);
    qp.P(j, j) += 2.0 * w.H[j];
    max_q = std::max(max_q, w.Q[j].maxCoeff());
  }
  qp.P = 0.5 * (qp.P + qp.P.transpose()).eval();
  qp.lb = Eigen::VectorXd::Constant(N, bounds.lower);
  qp.ub = Eigen::VectorXd::Constant(N, bounds.upper);
  if (mode == TerminalMode::hard_terminal) {
    qp.Aeq = pred.Gamma;
    qp.beq = targets.back() - pred.S * x - pred.offset;
    qp.relaxation_weight = 1e6 * max_q;
  } else {
    qp.Aeq.resize(0, N);
    qp.beq.resize(0);
  }
  return qp;
}

QpProblem condense(const HorizonPrediction& pred, const AlipState& x_k, const NominalOrbit& orbit,
                   double t0, const WeightSchedule& w, const TorqueBounds& bounds,
                   TerminalMode mode) {
  if (!(pred.dt > 0.0)) throw ConstructionError("condense: prediction has no sample time");
  return condense(pred, x_k, horizon_targets(orbit, t0, pred.N, pred.dt), w, bounds, mode);
}

void ControllerConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("controller: dt must be positive");
  if (!(update_period > 0.0)) throw ParameterError("controller: update period must be positive");
  if (!(torque_limit > 0.0)) throw ParameterError("controller: torque limit must be positive");
  if (horizon_impacts < 1) throw ParameterError("controller: horizon_impacts must be >= 1");
  if (horizon_samples < 1) throw ParameterError("controller: horizon_samples must be >= 1");
  if (max_iterations < 1) throw ParameterError("controller: max_iterations must be >= 1");
  if (!std::isfinite(resolve_period)) throw ParameterError("controller: resolve_period must be finite");
}

std::string_view to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::none: return "none";
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::relaxed: return "relaxed";
    case SolveStatus::max_iterations: return "max_iterations";
    case SolveStatus::failed: return "failed";
    case SolveStatus::disabled: return "disabled";
    case SolveStatus::replayed: return "replayed";
  }
  return "unknown";
}

MpcController::MpcController(ControllerConfig config, AlipParams params)
    : config_(std::move(config)), params_(params) {
  config_.validate();
  params_.validate();
}

void MpcController::reset() {
  previous_.resize(0);
  last_torque_ = 0.0;
  diag_ = {};
}

int MpcController::horizon_length(const NominalOrbit& orbit, double t) const {
  if (config_.horizon == HorizonMode::fixed) return config_.horizon_samples;
  const int per_step = std::max(1, static_cast<int>(std::lround(orbit.T / config_.dt)));
  return samples_to_impact(orbit, t, config_.dt) + (config_.horizon_impacts - 1) * per_step;
}

double MpcController::step(const AlipState& x, double t, const NominalOrbit& orbit) {
  if (!config_.enabled) {
    diag_ = {};
    diag_.status = SolveStatus::disabled;
    last_torque_ = 0.0;
    return 0.0;
  }
  const double limit = config_.torque_limit;
  const int elapsed = static_cast<int>(std::lround((t - solved_at_) / config_.dt));
  if (config_.resolve_period > 0.0 && previous_.size() > 0 &&
      t - solved_at_ < config_.resolve_period - 1e-9 && elapsed < previous_.size()) {
    diag_.status = SolveStatus::replayed;
    last_torque_ = std::clamp(previous_(elapsed), -limit, limit);
    diag_.first_torque = last_torque_;
    return last_torque_;
  }
  const int N = horizon_length(orbit, t);
  diag_ = {};
  diag_.horizon = N;
  try {
    PredictionOptions popt;
    popt.compensate_orbit_defects = config_.compensate_orbit_defects;
    const HorizonPrediction pred = build_prediction(orbit, t, N, config_.dt, params_, popt);
    const WeightSchedule w = make_weight_schedule(config_.weights, orbit, t, N, config_.dt);
    const QpProblem qp = condense(pred, x, orbit, t, w, {-limit, limit}, config_.mode);

    Eigen::VectorXd guess;
    if (config_.warm_start && previous_.size() > 0) {
      const int shift = std::max(1, elapsed);
      guess = Eigen::VectorXd::Zero(N);
      const int avail = static_cast<int>(previous_.size()) - shift;
      const int n = std::min(N, std::max(0, avail));
      if (n > 0) guess.head(n) = previous_.segment(shift, n);
    }
    const QpSolution sol = solve_qp(qp, config_.max_iterations, guess);
    if (!sol.u.allFinite()) throw NumericalError("mpc: solver returned non-finite torques");
    previous_ = sol.u;
    solved_at_ = t;
    diag_.iterations = sol.iterations;
    diag_.objective = sol.objective;
    switch (sol.status) {
      case QpStatus::optimal: diag_.status = SolveStatus::optimal; break;
      case QpStatus::infeasible_equality_relaxed: diag_.status = SolveStatus::relaxed; break;
      case QpStatus::max_iterations: diag_.status = SolveStatus::max_iterations; break;
    }
    last_torque_ = std::clamp(sol.u(0), -limit, limit);
  } catch (const NumericalError&) {
    diag_.status = SolveStatus::failed;
    previous_.resize(0);
  } catch (const RankError&) {
    diag_.status = SolveStatus::failed;
    previous_.resize(0);
  }
  diag_.first_torque = last_torque_;
  return last_torque_;
}

}  // namespace alip
