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

#include "alip/commands.hpp"

#include <exception>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "alip/errors.hpp"
#include "alip/keyvalue.hpp"

namespace alip {

namespace {

std::filesystem::path prepare(const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) throw ConfigError("cannot create output directory " + out.string() + ": " + ec.message());
  return out;
}

}  // namespace

int cmd_synthesize(const Scenario& s, const std::filesystem::path& out, std::ostream& log) {
  const NominalOrbit orbit = resolve_orbit(s);
  const auto path = prepare(out) / (s.name + ".orbit");
  save_orbit(orbit, path);
  log << "orbit " << path.string() << "\n"
      << "residual.theta = " << format_double(orbit.residual.theta) << "\n"
      << "residual.L = " << format_double(orbit.residual.L) << "\n"
      << "max_feedforward_torque = " << format_double(max_feedforward_torque(orbit)) << "\n";
  return kExitOk;
}

int cmd_run(const Scenario& s, const std::filesystem::path& out, std::ostream& log,
            std::optional<std::uint64_t> seed) {
  const NominalOrbit orbit = resolve_orbit(s);
  SimConfig cfg = s.sim;
  if (seed) cfg.seed = *seed;
  const SimLog run = run_scenario(cfg, orbit, s.terrain);
  const auto dir = prepare(out);
  write_csv(run, dir / (s.name + ".csv"));
  if (run.rows.empty()) throw NumericalError("run produced no samples: " + run.failure_message);
  const Metrics m = metrics(run);
  const std::string summary = serialize_metrics(m);
  std::ofstream(dir / (s.name + ".summary"), std::ios::binary) << summary;
  log << summary;
  if (run.numerical_failure) {
    log << "numerical failure: " << run.failure_message << "\n";
    return kExitNumerical;
  }
  return m.fell ? kExitFell : kExitOk;
}

int cmd_metrics(const Scenario& s, const std::filesystem::path& out, std::ostream& log) {
  const SimLog run = read_csv(out / (s.name + ".csv"));
  log << serialize_metrics(metrics(run));
  return kExitOk;
}

int report_exception(std::ostream& err) {
  try {
    throw;
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SynthesisError& e) {
    err << "synthesis failed: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameter: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace alip
