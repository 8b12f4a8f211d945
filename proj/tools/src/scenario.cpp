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

#include "alip/scenario.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include "alip/errors.hpp"
#include "alip/keyvalue.hpp"

namespace alip {

namespace {

class Reader {
 public:
  explicit Reader(const KeyValueDocument& doc) : doc_(doc) {}

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    if (doc_.has(key)) throw ConfigError(doc_.where(key) + message, doc_.line_of(key));
    throw ConfigError(doc_.source() + ": " + message);
  }

  /// Runs a validator and rethrows its message against `key`.
  template <typename F>
  void check(const std::string& key, F&& f) const {
    try {
      f();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(key, e.what());
    }
  }

  double positive(const std::string& key, double fallback) const {
    const double v = doc_.get_double(key, fallback);
    if (!(v > 0.0)) fail(key, "`" + key + "` must be positive");
    return v;
  }

  template <typename E>
  E choice(const std::string& key, E fallback,
           std::initializer_list<std::pair<const char*, E>> options) const {
    if (!doc_.has(key)) return fallback;
    const std::string v = doc_.get_string(key);
    std::string names;
    for (const auto& [name, value] : options) {
      if (v == name) return value;
      names += names.empty() ? name : std::string(", ") + name;
    }
    fail(key, "`" + key + "` must be one of " + names + ", got `" + v + "`");
  }

  const KeyValueDocument& doc() const { return doc_; }

 private:
  const KeyValueDocument& doc_;
};

void read_controller(const Reader& r, ControllerConfig& c) {
  const KeyValueDocument& d = r.doc();
  c.enabled = d.get_bool("controller.enabled", c.enabled);
  c.mode = r.choice("controller.mode", c.mode,
                    {{"soft_tracking", TerminalMode::soft_tracking},
                     {"hard_terminal", TerminalMode::hard_terminal}});
  c.horizon = r.choice("controller.horizon", c.horizon,
                       {{"next_impact", HorizonMode::next_impact}, {"fixed", HorizonMode::fixed}});
  c.horizon_impacts = static_cast<int>(d.get_int("controller.horizon_impacts", c.horizon_impacts));
  c.horizon_samples = static_cast<int>(d.get_int("controller.horizon_samples", c.horizon_samples));
  c.dt = r.positive("controller.dt", c.dt);
  c.update_period = r.positive("controller.update_period", c.update_period);
  c.resolve_period = d.get_double("controller.resolve_period", c.resolve_period);
  c.torque_limit = r.positive("controller.torque_limit", c.torque_limit);
  c.max_iterations = static_cast<int>(d.get_int("controller.max_iterations", c.max_iterations));
  c.compensate_orbit_defects =
      d.get_bool("controller.compensate_orbit_defects", c.compensate_orbit_defects);
  c.warm_start = d.get_bool("controller.warm_start", c.warm_start);
  WeightPolicy& w = c.weights;
  w.H = r.positive("controller.weights.H", w.H);
  w.Q_theta = r.positive("controller.weights.Q_theta", w.Q_theta);
  w.Q_L = r.positive("controller.weights.Q_L", w.Q_L);
  w.growth = d.get_double("controller.weights.growth", w.growth);
  if (!(w.growth >= 1.0)) r.fail("controller.weights.growth", "growth must be >= 1");
  w.terminal_multiplier = d.get_double("controller.weights.terminal_multiplier",
                                       w.terminal_multiplier);
  if (!(w.terminal_multiplier >= 1.0)) {
    r.fail("controller.weights.terminal_multiplier", "terminal_multiplier must be >= 1");
  }
  if (c.horizon_impacts < 1) r.fail("controller.horizon_impacts", "must be >= 1");
  if (c.horizon_samples < 1) r.fail("controller.horizon_samples", "must be >= 1");
  if (c.max_iterations < 1) r.fail("controller.max_iterations", "must be >= 1");
}

void read_perturbations(const Reader& r, std::vector<PerturbationEvent>& out) {
  const KeyValueDocument& d = r.doc();
  std::set<long long> ids;
  for (const std::string& key : d.keys_with_prefix("perturbation.")) {
    const auto dot = key.find('.', 13);
    const std::string id = key.substr(13, dot == std::string::npos ? dot : dot - 13);
    long long n = -1;
    try {
      std::size_t used = 0;
      n = std::stoll(id, &used);
      if (used != id.size()) n = -1;
    } catch (const std::exception&) {
      n = -1;
    }
    if (n < 0) r.fail(key, "perturbation keys must look like perturbation.<index>.<field>");
    ids.insert(n);
  }
  for (long long id : ids) {
    const std::string p = "perturbation." + std::to_string(id) + ".";
    PerturbationEvent e;
    e.t_start = d.get_double(p + "t_start");
    e.duration = d.get_double(p + "duration", e.duration);
    e.torque_scale = d.get_double(p + "torque_scale", e.torque_scale);
    r.check(p + "duration", [&] { e.validate(); });
    out.push_back(e);
  }
}

}  // namespace

Scenario parse_scenario(std::istream& in, const std::string& source,
                        const std::filesystem::path& base_dir) {
  const KeyValueDocument d = KeyValueDocument::parse(in, source);
  const Reader r(d);
  if (d.get_string("format", "alip-scenario") != "alip-scenario") {
    r.fail("format", "expected format = alip-scenario");
  }
  if (d.get_int("version", 1) != 1) r.fail("version", "unsupported scenario version");

  Scenario s;
  s.name = d.get_string("name");
  if (s.name.find_first_of("/\\") != std::string::npos) r.fail("name", "name must not contain path separators");

  s.terrain.run = d.get_double("terrain.run", s.terrain.run);
  s.terrain.rise = d.get_double("terrain.rise", s.terrain.rise);
  s.terrain.num_steps = static_cast<int>(d.get_int("terrain.num_steps", s.terrain.num_steps));
  r.check("terrain.num_steps", [&] { s.terrain.validate(); });

  OrbitSpec& o = s.orbit;
  if (d.has("orbit.file")) {
    for (const char* k : {"orbit.period", "orbit.r_apex", "orbit.theta_start", "orbit.mass",
                          "orbit.gravity"}) {
      if (d.has(k)) r.fail(k, std::string("`") + k + "` conflicts with orbit.file");
    }
    std::filesystem::path file = d.get_string("orbit.file");
    if (file.is_relative()) file = base_dir / file;
    if (!std::filesystem::exists(file)) r.fail("orbit.file", "orbit file " + file.string() + " does not exist");
    o.file = file;
    r.check("orbit.file", [&] { o.pinned = load_orbit(file); });
    o.period = o.pinned->T;
    o.params = o.pinned->params;
  } else {
    o.period = r.positive("orbit.period", o.period);
    o.r_apex = r.positive("orbit.r_apex", o.r_apex);
    o.theta_start = d.get_double("orbit.theta_start", o.theta_start);
    o.params.mass = r.positive("orbit.mass", o.params.mass);
    o.params.gravity = r.positive("orbit.gravity", o.params.gravity);
  }
  o.tolerance = r.positive("orbit.tolerance", o.tolerance);

  SimConfig& c = s.sim;
  c.T = o.period;
  c.num_steps = s.terrain.num_steps;
  c.dt_integration = r.positive("sim.dt_integration", c.dt_integration);
  c.fall_threshold = r.positive("sim.fall_threshold", c.fall_threshold);
  const long long seed = d.get_int("sim.seed", 0);
  if (seed < 0) r.fail("sim.seed", "seed must be non-negative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.initial_offset.theta_c = d.get_double("sim.initial_offset.theta", 0.0);
  c.initial_offset.L = d.get_double("sim.initial_offset.L", 0.0);
  c.initial_jitter.theta_c = d.get_double("sim.initial_jitter.theta", 0.0);
  c.initial_jitter.L = d.get_double("sim.initial_jitter.L", 0.0);
  if (c.initial_jitter.theta_c < 0.0 || c.initial_jitter.L < 0.0) {
    r.fail("sim.initial_jitter.theta", "initial jitter must be non-negative");
  }
  c.L_c = d.get_double("sim.L_c", 0.0);
  c.plant = r.choice("sim.plant", c.plant,
                     {{"nonlinear", PlantModel::nonlinear}, {"linearized", PlantModel::linearized}});
  read_controller(r, c.controller);
  read_perturbations(r, c.perturbations);

  const auto divides = [](double whole, double part) {
    const double n = std::round(whole / part);
    return n >= 1.0 && std::abs(n * part - whole) <= 1e-12;
  };
  if (!divides(c.T, c.dt_integration)) {
    r.fail("sim.dt_integration", "dt_integration does not divide the step period " +
                                     format_double(c.T));
  }
  if (!divides(c.controller.update_period, c.dt_integration)) {
    r.fail("sim.dt_integration", "dt_integration does not divide controller.update_period");
  }
  if (!divides(c.T, c.controller.dt)) {
    r.fail("controller.dt", "controller.dt does not divide the step period " + format_double(c.T));
  }

  s.output_dir = d.get_string("output.dir", s.output_dir.string());
  d.reject_unused();
  return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario " + path.string());
  return parse_scenario(in, path.string(), path.parent_path());
}

NominalOrbit resolve_orbit(const Scenario& s) {
  if (s.orbit.pinned) {
    validate_orbit(*s.orbit.pinned, s.orbit.tolerance);
    return *s.orbit.pinned;
  }
  SynthesisOptions opt;
  opt.tolerance = s.orbit.tolerance;
  return synthesize_orbit(s.terrain, s.orbit.params, s.orbit.period, s.orbit.r_apex,
                          s.orbit.theta_start, opt);
}

}  // namespace alip
