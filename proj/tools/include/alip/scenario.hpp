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
#include <iosfwd>
#include <optional>
#include <string>

#include "alip/orbit.hpp"
#include "alip/sim.hpp"

namespace alip {

/// Orbit either loaded from a pinned file or synthesized from parameters.
struct OrbitSpec {
  std::optional<std::filesystem::path> file;
  std::optional<NominalOrbit> pinned;
  double period = 0.4;
  double r_apex = 0.86;
  double theta_start = -0.2;
  AlipParams params;
  double tolerance = 1e-3;
};

struct Scenario {
  std::string name;
  StairGeometry terrain;
  OrbitSpec orbit;
  SimConfig sim;
  std::filesystem::path output_dir = "out";
};

/// Reads and validates a scenario document. Relative orbit file paths are
/// resolved against the scenario's directory. Every problem is reported as
/// a ConfigError carrying the offending line.
Scenario parse_scenario(std::istream& in, const std::string& source = "<scenario>",
                        const std::filesystem::path& base_dir = {});
Scenario parse_scenario(const std::filesystem::path& path);

/// Pinned orbit when present, otherwise a fresh synthesis.
NominalOrbit resolve_orbit(const Scenario& s);

}  // namespace alip
