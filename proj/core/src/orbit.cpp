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

#include "alip/orbit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "alip/errors.hpp"
#include "alip/keyvalue.hpp"

namespace alip {

void StairGeometry::validate() const {
  if (!(run >= 0.0) || !std::isfinite(run)) throw ParameterError("StairGeometry: run must be >= 0");
  if (!std::isfinite(rise)) throw ParameterError("StairGeometry: rise must be finite");
  if (num_steps < 1) throw ParameterError("StairGeometry: num_steps must be >= 1");
}

double PeriodicityResidual::max_abs() const noexcept {
  return std::max(std::abs(theta), std::abs(L));
}

double nominal_L(const NominalOrbit& orbit, double t) {
  if (!(t >= 0.0 && t <= orbit.T)) {
    std::ostringstream os;
    os << "nominal_L: t=" << t << " outside [0, " << orbit.T << "]";
    throw RangeError(os.str());
  }
  const double r = orbit.r_c_curve.eval(t);
  return orbit.params.mass * r * r * orbit.theta_curve.derivative(t);
}

double orbit_phase(const NominalOrbit& orbit, double t) {
  double phase = std::fmod(t, orbit.T);
  if (phase < 0.0) phase += orbit.T;
  // fmod of a negative number can round up to exactly T.
  if (phase >= orbit.T) phase = 0.0;
  return phase;
}

OrbitSample orbit_sample_at_phase(const NominalOrbit& orbit, double phase) {
  return {{orbit.theta_curve.eval(phase), nominal_L(orbit, phase)},
          orbit.r_c_curve.eval(phase),
          orbit.r_c_curve.derivative(phase)};
}

OrbitSample orbit_sample(const NominalOrbit& orbit, double t) {
  return orbit_sample_at_phase(orbit, orbit_phase(orbit, t));
}

double feedforward_torque(const NominalOrbit& orbit, double phase) {
  const double m = orbit.params.mass;
  const double r = orbit.r_c_curve.eval(phase);
  const double dr = orbit.r_c_curve.derivative(phase);
  const double th = orbit.theta_curve.eval(phase);
  const double dth = orbit.theta_curve.derivative(phase);
  const double ddth = orbit.theta_curve.second_derivative(phase);
  const double dL = m * (2.0 * r * dr * dth + r * r * ddth);
  return dL - m * orbit.params.gravity * r * std::sin(th);
}

double max_feedforward_torque(const NominalOrbit& orbit, int samples) {
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double phase = orbit.T * i / (samples - 1);
    worst = std::max(worst, std::abs(feedforward_torque(orbit, phase)));
  }
  return worst;
}

PeriodicityResidual periodicity_residual(const NominalOrbit& orbit) {
  const OrbitSample end = orbit_sample_at_phase(orbit, orbit.T);
  const OrbitSample start = orbit_sample_at_phase(orbit, 0.0);
  const PlanarVec v = com_velocity_from_state(end.state, end.r_c, end.dr_c, orbit.params);
  const double L_plus = impact_transfer(end.state.L, v, orbit.step_vector, orbit.params);
  const PlanarVec p_new = com_position(end.state, end.r_c) - orbit.step_vector;
  return {com_angle(p_new) - start.state.theta_c, L_plus - start.state.L};
}

void validate_orbit(const NominalOrbit& orbit, double tolerance, double theta_limit) {
  constexpr int kGrid = 401;
  double r_min = std::numeric_limits<double>::infinity();
  double th_min = r_min;
  double th_max = -r_min;
  for (int i = 0; i < kGrid; ++i) {
    const double phase = orbit.T * i / (kGrid - 1);
    r_min = std::min(r_min, orbit.r_c_curve.eval(phase));
    const double th = orbit.theta_curve.eval(phase);
    th_min = std::min(th_min, th);
    th_max = std::max(th_max, th);
  }
  std::ostringstream os;
  if (!(r_min > 0.0)) {
    os << "orbit pendulum length reaches " << r_min << " m (must stay positive)";
    throw SynthesisError(os.str());
  }
  if (th_min < -theta_limit || th_max > theta_limit) {
    os << "orbit CoM angle spans [" << th_min << ", " << th_max << "] rad, outside +/-"
       << theta_limit;
    throw SynthesisError(os.str());
  }
  const PeriodicityResidual res = periodicity_residual(orbit);
  if (!(res.max_abs() <= tolerance)) {
    os << "orbit periodicity residual (" << res.theta << " rad, " << res.L
       << " kg m^2/s) exceeds tolerance " << tolerance;
    throw SynthesisError(os.str());
  }
}

namespace {

// Decision vector: [theta_T, r_1, r_2, r_3, theta_1, theta_2, theta_3]. The
// length endpoints follow from the boundary angles and the step vector.
using Design = Eigen::Matrix<double, 7, 1>;

struct Problem {
  StairGeometry geom;
  AlipParams params;
  double T;
  double r_apex;
  double theta_start;
  int collocation;
};

std::optional<NominalOrbit> orbit_from_design(const Problem& pb, const Design& v) {
  const double th0 = pb.theta_start;
  const double thT = v(0);
  // [sin thT, -sin th0; cos thT, -cos th0] [r_T; r_0] = [run; rise]
  const double det = std::sin(th0 - thT);
  if (std::abs(det) < 1e-9) return std::nullopt;
  const double rT = (-std::cos(th0) * pb.geom.run + std::sin(th0) * pb.geom.rise) / det;
  const double r0 = (std::sin(thT) * pb.geom.rise - std::cos(thT) * pb.geom.run) / det;
  if (!(r0 > 0.0) || !(rT > 0.0)) return std::nullopt;
  NominalOrbit orbit{BezierCurve({r0, v(1), v(2), v(3), rT}, pb.T),
                     BezierCurve({th0, v(4), v(5), v(6), thT}, pb.T),
                     pb.T,
                     pb.geom.step_vector(),
                     pb.params,
                     {}};
  return orbit;
}

struct Evaluation {
  Eigen::VectorXd torque;         // scaled torque residual at collocation phases
  Eigen::Vector2d constraints;    // periodicity in L, mid-step length
};

std::optional<Evaluation> evaluate(const Problem& pb, const Design& v) {
  auto orbit = orbit_from_design(pb, v);
  if (!orbit) return std::nullopt;
  Evaluation e;
  e.torque.resize(pb.collocation);
  const double scale = 1.0 / std::sqrt(static_cast<double>(pb.collocation));
  for (int i = 0; i < pb.collocation; ++i) {
    const double phase = pb.T * i / (pb.collocation - 1);
    e.torque(i) = scale * feedforward_torque(*orbit, phase);
  }
  try {
    e.constraints(0) = periodicity_residual(*orbit).L;
  } catch (const DomainError&) {
    return std::nullopt;
  }
  e.constraints(1) = orbit->r_c_curve.eval(0.5 * pb.T) - pb.r_apex;
  return e;
}

Design initial_design(const Problem& pb) {
  const double th0 = pb.theta_start;
  const double thT = std::abs(th0) > 1e-3 ? -th0 : 0.1;
  Design v;
  v(0) = thT;
  // Straight line thetas; length placeholders are corrected after the
  // endpoints are known.
  for (int i = 1; i <= 3; ++i) {
    v(i) = pb.r_apex;
    v(3 + i) = th0 + (thT - th0) * i / 4.0;
  }
  if (auto orbit = orbit_from_design(pb, v)) {
    const double r0 = orbit->r_c_curve.control_points()[0];
    const double rT = orbit->r_c_curve.control_points()[4];
    v(1) = 0.75 * r0 + 0.25 * rT;
    v(3) = 0.25 * r0 + 0.75 * rT;
    // Pick the middle point so that r(T/2) = r_apex.
    v(2) = (16.0 * pb.r_apex - r0 - 4.0 * v(1) - 4.0 * v(3) - rT) / 6.0;
  }
  return v;
}

NominalOrbit stepping_in_place(const StairGeometry& geom, const AlipParams& params, double T,
                               double r_apex, double theta_start) {
  NominalOrbit orbit{BezierCurve({r_apex, r_apex, r_apex, r_apex, r_apex}, T),
                     BezierCurve({theta_start, theta_start, theta_start, theta_start,
                                  theta_start},
                                 T),
                     T,
                     geom.step_vector(),
                     params,
                     {}};
  orbit.residual = periodicity_residual(orbit);
  return orbit;
}

}  // namespace

NominalOrbit synthesize_orbit(const StairGeometry& geom, const AlipParams& params, double T,
                              double r_apex, double theta_start,
                              const SynthesisOptions& options) {
  params.validate();
  if (!(T > 0.0)) throw SynthesisError("synthesize_orbit: step period must be positive");
  if (!std::isfinite(geom.run) || !std::isfinite(geom.rise) || geom.run < 0.0) {
    throw SynthesisError("synthesize_orbit: run must be finite and non-negative");
  }
  if (!(r_apex > geom.rise)) {
    std::ostringstream os;
    os << "synthesize_orbit: mid-step length " << r_apex << " m must exceed the rise "
       << geom.rise << " m";
    throw SynthesisError(os.str());
  }
  if (!(std::abs(theta_start) < options.theta_limit)) {
    throw SynthesisError("synthesize_orbit: |theta_start| must be below the angle limit");
  }

  if (std::abs(geom.run) < 1e-12 && std::abs(geom.rise) < 1e-12) {
    NominalOrbit orbit = stepping_in_place(geom, params, T, r_apex, theta_start);
    validate_orbit(orbit, options.tolerance, options.theta_limit);
    return orbit;
  }

  const Problem pb{geom, params, T, r_apex, theta_start, std::max(options.collocation_points, 9)};
  Design v = initial_design(pb);
  auto current = evaluate(pb, v);
  if (!current) {
    throw SynthesisError("synthesize_orbit: no admissible initial design for this geometry");
  }

  // Gauss-Newton on the torque residual with the two equalities enforced
  // through the linearized KKT system, Levenberg damping, and an L1 merit.
  double mu = 1e-6;
  double rho = 1.0;
  auto merit = [&](const Evaluation& e) {
    return 0.5 * e.torque.squaredNorm() + rho * e.constraints.lpNorm<1>();
  };
  bool converged = false;
  for (int iter = 0; iter < options.max_iterations && !converged; ++iter) {
    Eigen::MatrixXd J(pb.collocation, 7);
    Eigen::Matrix<double, 2, 7> C;
    bool ok = true;
    for (int j = 0; j < 7 && ok; ++j) {
      const double h = 1e-7 * std::max(1.0, std::abs(v(j)));
      Design vp = v, vm = v;
      vp(j) += h;
      vm(j) -= h;
      auto ep = evaluate(pb, vp);
      auto em = evaluate(pb, vm);
      if (!ep || !em) {
        ok = false;
        break;
      }
      J.col(j) = (ep->torque - em->torque) / (2.0 * h);
      C.col(j) = (ep->constraints - em->constraints) / (2.0 * h);
    }
    if (!ok) throw SynthesisError("synthesize_orbit: design left the admissible region");

    const Eigen::Matrix<double, 7, 7> JtJ = J.transpose() * J;
    const Eigen::Matrix<double, 7, 1> g = J.transpose() * current->torque;
    bool accepted = false;
    while (mu < 1e12) {
      Eigen::Matrix<double, 9, 9> K = Eigen::Matrix<double, 9, 9>::Zero();
      K.topLeftCorner<7, 7>() =
          JtJ + mu * Eigen::Matrix<double, 7, 7>::Identity() * std::max(1.0, JtJ.trace() / 7.0);
      K.topRightCorner<7, 2>() = C.transpose();
      K.bottomLeftCorner<2, 7>() = C;
      Eigen::Matrix<double, 9, 1> rhs;
      rhs << -g, -current->constraints;
      const Eigen::Matrix<double, 9, 1> sol = K.fullPivLu().solve(rhs);
      const Design step = sol.head<7>();
      rho = std::max(rho, 1.5 * sol.tail<2>().lpNorm<Eigen::Infinity>());
      const Design trial = v + step;
      auto next = evaluate(pb, trial);
      if (next && merit(*next) < merit(*current)) {
        const double decrease = merit(*current) - merit(*next);
        const bool small_step = step.lpNorm<Eigen::Infinity>() < 1e-12;
        v = trial;
        current = next;
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        converged = small_step || decrease < 1e-18;
        break;
      }
      mu *= 10.0;
    }
    if (!accepted) break;
  }

  NominalOrbit orbit = *orbit_from_design(pb, v);
  orbit.residual = periodicity_residual(orbit);
  validate_orbit(orbit, options.tolerance, options.theta_limit);
  return orbit;
}

std::string serialize_orbit(const NominalOrbit& orbit) {
  KeyValueWriter w;
  w.comment("nominal stair-climbing orbit");
  w.put("format", std::string("alip-orbit"));
  w.put("version", 1);
  w.put("period", orbit.T);
  w.put("mass", orbit.params.mass);
  w.put("gravity", orbit.params.gravity);
  w.put("step.run", orbit.step_vector.x);
  w.put("step.rise", orbit.step_vector.z);
  const auto& rc = orbit.r_c_curve.control_points();
  const auto& th = orbit.theta_curve.control_points();
  w.put("r_c.control_points", std::vector<double>(rc.begin(), rc.end()));
  w.put("theta.control_points", std::vector<double>(th.begin(), th.end()));
  w.put("residual.theta", orbit.residual.theta);
  w.put("residual.L", orbit.residual.L);
  return w.str();
}

NominalOrbit parse_orbit(const std::string& text, const std::string& source) {
  std::istringstream in(text);
  const KeyValueDocument doc = KeyValueDocument::parse(in, source);
  if (doc.get_string("format") != "alip-orbit") {
    throw ConfigError(doc.where("format") + "not an alip-orbit document", doc.line_of("format"));
  }
  if (doc.get_int("version") != 1) {
    throw ConfigError(doc.where("version") + "unsupported orbit version", doc.line_of("version"));
  }
  const double T = doc.get_double("period");
  AlipParams params{doc.get_double("mass"), doc.get_double("gravity")};
  const PlanarVec step{doc.get_double("step.run"), doc.get_double("step.rise")};
  const auto rc = doc.get_doubles("r_c.control_points", 5);
  const auto th = doc.get_doubles("theta.control_points", 5);
  PeriodicityResidual stored{doc.get_double("residual.theta"), doc.get_double("residual.L")};
  doc.reject_unused();
  try {
    params.validate();
    NominalOrbit orbit{BezierCurve({rc[0], rc[1], rc[2], rc[3], rc[4]}, T),
                       BezierCurve({th[0], th[1], th[2], th[3], th[4]}, T),
                       T,
                       step,
                       params,
                       stored};
    return orbit;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(source + ": " + e.what());
  }
}

void save_orbit(const NominalOrbit& orbit, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << serialize_orbit(orbit);
}

NominalOrbit load_orbit(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open orbit file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return parse_orbit(os.str(), path.string());
}

}  // namespace alip
