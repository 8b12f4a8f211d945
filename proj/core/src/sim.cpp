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

#include "alip/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "alip/errors.hpp"
#include "alip/keyvalue.hpp"

namespace alip {

namespace {

AlipDerivative eval(PlantModel model, AlipState s, double r, double L_c, double tau,
                    const AlipParams& p) {
  return model == PlantModel::nonlinear ? nonlinear_dynamics(s, r, L_c, tau, p)
                                        : linearized_dynamics(s, r, tau, p);
}

AlipState advance(AlipState s, const AlipDerivative& d, double h) {
  return {s.theta_c + h * d.dtheta_c, s.L + h * d.dL};
}

bool near_multiple(double value, double unit, long long& count) {
  count = std::llround(value / unit);
  return count >= 1 && std::abs(static_cast<double>(count) * unit - value) <= 1e-12;
}

}  // namespace

AlipState rk4_step(AlipState s, const std::function<double(double)>& r_c_of_t, double L_c,
                   double tau, double t, double dt, const AlipParams& p, PlantModel model) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("rk4_step: dt must be positive");
  const double h = 0.5 * dt;
  const double r0 = r_c_of_t(t);
  const double rh = r_c_of_t(t + h);
  const double r1 = r_c_of_t(t + dt);
  if (!(r0 > 0.0) || !(rh > 0.0) || !(r1 > 0.0)) {
    throw DomainError("rk4_step: pendulum length must stay positive over the step");
  }
  const auto stage = [&](AlipState x, double r) {
    if (!std::isfinite(x.theta_c) || !std::isfinite(x.L) || !std::isfinite(tau)) {
      std::ostringstream os;
      os << "rk4_step: non-finite stage at t = " << t << " from (" << s.theta_c << ", " << s.L
         << ") with tau = " << tau;
      throw NumericalError(os.str());
    }
    return eval(model, x, r, L_c, tau, p);
  };
  const AlipDerivative k1 = stage(s, r0);
  const AlipDerivative k2 = stage(advance(s, k1, h), rh);
  const AlipDerivative k3 = stage(advance(s, k2, h), rh);
  const AlipDerivative k4 = stage(advance(s, k3, dt), r1);
  const AlipState out{
      s.theta_c + dt / 6.0 * (k1.dtheta_c + 2.0 * k2.dtheta_c + 2.0 * k3.dtheta_c + k4.dtheta_c),
      s.L + dt / 6.0 * (k1.dL + 2.0 * k2.dL + 2.0 * k3.dL + k4.dL)};
  if (!std::isfinite(out.theta_c) || !std::isfinite(out.L)) {
    std::ostringstream os;
    os << "rk4_step: non-finite state at t = " << t << " from (" << s.theta_c << ", " << s.L
       << ") with tau = " << tau;
    throw NumericalError(os.str());
  }
  return out;
}

bool PerturbationEvent::active(double t) const noexcept {
  constexpr double eps = 1e-9;
  return t >= t_start - eps && t < t_start + duration - eps;
}

void PerturbationEvent::validate() const {
  if (!(duration > 0.0)) throw ParameterError("perturbation: duration must be positive");
  if (!(torque_scale >= 0.0)) throw ParameterError("perturbation: torque_scale must be >= 0");
  if (!std::isfinite(t_start)) throw ParameterError("perturbation: t_start must be finite");
}

void SimConfig::validate(const NominalOrbit& orbit) const {
  controller.validate();
  long long n = 0;
  if (!(dt_integration > 0.0)) throw ParameterError("sim: dt_integration must be positive");
  if (std::abs(T - orbit.T) > 1e-12) {
    throw ParameterError("sim: step period does not match the orbit period");
  }
  if (!near_multiple(T, dt_integration, n)) {
    throw ParameterError("sim: dt_integration must divide the step period");
  }
  if (!near_multiple(controller.update_period, dt_integration, n)) {
    throw ParameterError("sim: dt_integration must divide the controller update period");
  }
  if (!near_multiple(T, controller.dt, n)) {
    throw ParameterError("sim: controller dt must divide the step period");
  }
  if (controller.resolve_period > 0.0 &&
      !near_multiple(controller.resolve_period, controller.update_period, n)) {
    throw ParameterError("sim: controller resolve_period must be a multiple of update_period");
  }
  if (num_steps < 1) throw ParameterError("sim: num_steps must be >= 1");
  double theta_max = 0.0;
  for (int i = 0; i <= 400; ++i) {
    theta_max = std::max(theta_max, std::abs(orbit.theta_curve.eval(orbit.T * i / 400.0)));
  }
  if (!(fall_threshold > theta_max)) {
    throw ParameterError("sim: fall_threshold must exceed the orbit angle range");
  }
  if (!(initial_jitter.theta_c >= 0.0) || !(initial_jitter.L >= 0.0)) {
    throw ParameterError("sim: initial jitter must be non-negative");
  }
  for (const auto& e : perturbations) e.validate();
}

SimLog run_scenario(const SimConfig& cfg, const NominalOrbit& orbit, const StairGeometry& terrain) {
  cfg.validate(orbit);
  const AlipParams& p = orbit.params;
  const double dt = cfg.dt_integration;
  const double T = orbit.T;
  const long long per_step = std::llround(T / dt);
  const long long per_update = std::llround(cfg.controller.update_period / dt);
  const double limit = cfg.controller.torque_limit;
  const PlanarVec step = terrain.step_vector();

  const auto r_of_phase = [&](double phase) {
    return orbit.r_c_curve.eval(std::clamp(phase, 0.0, T));
  };

  AlipState x = orbit_sample_at_phase(orbit, 0.0).state;
  x.theta_c += cfg.initial_offset.theta_c;
  x.L += cfg.initial_offset.L;
  if (cfg.initial_jitter.theta_c > 0.0 || cfg.initial_jitter.L > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    x.theta_c += cfg.initial_jitter.theta_c * unit(rng);
    x.L += cfg.initial_jitter.L * unit(rng);
  }

  MpcController controller(cfg.controller, p);
  SimLog log;
  log.rows.reserve(static_cast<std::size_t>(cfg.num_steps * per_step + 1));
  double tau_cmd = 0.0;
  SolveStatus status = SolveStatus::none;

  try {
    for (int s = 0; s < cfg.num_steps; ++s) {
      const double t_step = s * T;
      for (long long i = 0; i < per_step; ++i) {
        const long long k = s * per_step + i;
        const double phase = static_cast<double>(i) * dt;
        const double t = t_step + phase;
        if (k % per_update == 0) {
          tau_cmd = controller.step(x, t, orbit);
          status = controller.diagnostics().status;
        }
        double scale = 1.0;
        bool perturbed = false;
        for (const auto& e : cfg.perturbations) {
          if (e.active(t)) {
            scale *= e.torque_scale;
            perturbed = true;
          }
        }
        const double tau = std::clamp(scale * tau_cmd, -limit, limit);
        const OrbitSample des = orbit_sample_at_phase(orbit, phase);
        log.rows.push_back({t, x.theta_c, x.L, des.state.theta_c, des.state.L, tau_cmd, tau,
                            des.r_c, s, false, perturbed, false, status});

        x = rk4_step(x, r_of_phase, cfg.L_c, tau, phase, dt, p, cfg.plant);
        const bool last = i + 1 == per_step;
        const double t_next = last ? (s + 1) * T : t_step + static_cast<double>(i + 1) * dt;
        const bool fell = std::abs(x.theta_c) > cfg.fall_threshold;
        if (!last && !fell) continue;

        const OrbitSample end = orbit_sample_at_phase(orbit, last ? T : phase + dt);
        SimRow row{t_next, x.theta_c, x.L, end.state.theta_c, end.state.L, tau_cmd, tau,
                   end.r_c, s, last && !fell, perturbed, fell, status};
        if (fell) {
          log.rows.push_back(row);
          log.fell = true;
          return log;
        }

        ImpactRecord rec;
        rec.step_index = s;
        rec.t = t_next;
        rec.pre = x;
        rec.r_c = end.r_c;
        rec.dr_c = end.dr_c;
        rec.step_vector = step;
        const PlanarVec com = com_position(x, end.r_c) - step;
        const PlanarVec v = com_velocity_from_state(x, end.r_c, end.dr_c, p);
        rec.post.L = impact_transfer(x.L, v, step, p);
        rec.post.theta_c = com.z > 0.0 ? com_angle(com) : std::copysign(std::numbers::pi / 2.0, com.x);
        x = rec.post;
        log.impacts.push_back(rec);
        if (std::abs(x.theta_c) > cfg.fall_threshold) {
          row.fell = true;
          log.rows.push_back(row);
          log.fell = true;
          return log;
        }
        log.rows.push_back(row);
      }
    }
  } catch (const NumericalError& e) {
    log.numerical_failure = true;
    log.failure_message = e.what();
  }
  return log;
}

Metrics metrics(const SimLog& log) {
  if (log.rows.empty()) throw ParameterError("metrics: empty log");
  Metrics m;
  double se_theta = 0.0;
  double se_L = 0.0;
  std::vector<double> sum;
  std::vector<int> count;
  for (const SimRow& r : log.rows) {
    const double dth = r.theta_c - r.theta_des;
    const double dL = r.L - r.L_des;
    se_theta += dth * dth;
    se_L += dL * dL;
    m.peak_abs_torque = std::max(m.peak_abs_torque, std::abs(r.tau_applied));
    m.fell = m.fell || r.fell;
    if (r.impact) {
      ++m.steps_completed;
      m.impact_deviations.push_back({r.step_index, dth, dL});
      continue;
    }
    if (r.fell) continue;
    const auto idx = static_cast<std::size_t>(std::max(0, r.step_index));
    if (idx >= sum.size()) {
      sum.resize(idx + 1, 0.0);
      count.resize(idx + 1, 0);
    }
    sum[idx] += std::abs(r.tau_applied);
    ++count[idx];
  }
  m.fell = m.fell || log.fell;
  const double n = static_cast<double>(log.rows.size());
  m.rms_theta_error = std::sqrt(se_theta / n);
  m.rms_L_error = std::sqrt(se_L / n);
  m.mean_abs_torque.resize(sum.size());
  for (std::size_t i = 0; i < sum.size(); ++i) {
    m.mean_abs_torque[i] = count[i] > 0 ? sum[i] / count[i] : 0.0;
  }
  return m;
}

namespace {

constexpr const char* kHeader =
    "t,theta_c,L,theta_des,L_des,tau_commanded,tau_applied,r_c,step_index,impact,"
    "perturb_active,fell,qp_status";

double parse_number(std::string_view s, const std::string& where) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError(where + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

}  // namespace

SolveStatus parse_solve_status(std::string_view s) {
  for (SolveStatus st : {SolveStatus::none, SolveStatus::optimal, SolveStatus::relaxed,
                         SolveStatus::max_iterations, SolveStatus::failed,
                         SolveStatus::disabled, SolveStatus::replayed}) {
    if (to_string(st) == s) return st;
  }
  throw ConfigError("unknown qp_status '" + std::string(s) + "'");
}

void write_csv(const SimLog& log, std::ostream& os) {
  os << kHeader << '\n';
  for (const SimRow& r : log.rows) {
    os << format_double(r.t) << ',' << format_double(r.theta_c) << ',' << format_double(r.L)
       << ',' << format_double(r.theta_des) << ',' << format_double(r.L_des) << ','
       << format_double(r.tau_commanded) << ',' << format_double(r.tau_applied) << ','
       << format_double(r.r_c) << ',' << r.step_index << ',' << int(r.impact) << ','
       << int(r.perturb_active) << ',' << int(r.fell) << ',' << to_string(r.qp_status) << '\n';
  }
}

void write_csv(const SimLog& log, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + path.string());
  write_csv(log, os);
  if (!os) throw ConfigError("write failed for " + path.string());
}

SimLog read_csv(std::istream& is, const std::string& source) {
  std::string line;
  if (!std::getline(is, line) || line != kHeader) {
    throw ConfigError(source + ":1: unexpected CSV header", 1);
  }
  SimLog log;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    const std::string where = source + ":" + std::to_string(lineno);
    if (f.size() != 13) throw ConfigError(where + ": expected 13 columns", lineno);
    SimRow r;
    r.t = parse_number(f[0], where);
    r.theta_c = parse_number(f[1], where);
    r.L = parse_number(f[2], where);
    r.theta_des = parse_number(f[3], where);
    r.L_des = parse_number(f[4], where);
    r.tau_commanded = parse_number(f[5], where);
    r.tau_applied = parse_number(f[6], where);
    r.r_c = parse_number(f[7], where);
    r.step_index = static_cast<int>(parse_number(f[8], where));
    r.impact = parse_number(f[9], where) != 0.0;
    r.perturb_active = parse_number(f[10], where) != 0.0;
    r.fell = parse_number(f[11], where) != 0.0;
    r.qp_status = parse_solve_status(f[12]);
    log.fell = log.fell || r.fell;
    log.rows.push_back(r);
  }
  return log;
}

SimLog read_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path.string());
  return read_csv(is, path.string());
}

std::string serialize_metrics(const Metrics& m) {
  KeyValueWriter w;
  w.put("format", std::string("alip-metrics"));
  w.put("version", 1);
  w.put("steps_completed", m.steps_completed);
  w.put("fell", m.fell);
  w.put("rms_theta_error", m.rms_theta_error);
  w.put("rms_L_error", m.rms_L_error);
  w.put("peak_abs_torque", m.peak_abs_torque);
  for (std::size_t i = 0; i < m.mean_abs_torque.size(); ++i) {
    w.put("step." + std::to_string(i) + ".mean_abs_torque", m.mean_abs_torque[i]);
  }
  for (const auto& d : m.impact_deviations) {
    const std::string k = "impact." + std::to_string(d.step_index);
    w.put(k + ".theta_error", d.theta);
    w.put(k + ".L_error", d.L);
  }
  return w.str();
}

}  // namespace alip
