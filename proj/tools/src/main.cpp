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

#include <CLI11.hpp>
#include <iostream>

#include "alip/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stair-climbing ALIP orbits and MPC simulation"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::int64_t seed = -1;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--out", out_dir, "Output directory (overrides output.dir)");
  };
  CLI::App* synth = app.add_subcommand("synthesize", "Synthesize and save the nominal orbit");
  CLI::App* run = app.add_subcommand("run", "Simulate the scenario and write CSV and summary");
  CLI::App* met = app.add_subcommand("metrics", "Recompute the summary from a written CSV");
  for (CLI::App* c : {synth, run, met}) add_common(c);
  run->add_option("--seed", seed, "Override sim.seed")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : alip::kExitConfig;
  }

  try {
    const alip::Scenario s = alip::parse_scenario(scenario_path);
    const std::filesystem::path out = out_dir.empty() ? s.output_dir : std::filesystem::path(out_dir);
    if (synth->parsed()) return alip::cmd_synthesize(s, out, std::cout);
    if (run->parsed()) {
      std::optional<std::uint64_t> override_seed;
      if (seed >= 0) override_seed = static_cast<std::uint64_t>(seed);
      return alip::cmd_run(s, out, std::cout, override_seed);
    }
    return alip::cmd_metrics(s, out, std::cout);
  } catch (...) {
    return alip::report_exception(std::cerr);
  }
}
