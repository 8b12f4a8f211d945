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

#include "alip/scenario.hpp"

namespace alip {

enum ExitCode : int { kExitOk = 0, kExitFell = 1, kExitConfig = 2, kExitNumerical = 3 };

/// Writes <out>/<name>.orbit and prints the periodicity residual.
int cmd_synthesize(const Scenario& s, const std::filesystem::path& out, std::ostream& log);

/// Writes <out>/<name>.csv and <out>/<name>.summary. Returns kExitFell when
/// the run fell and kExitNumerical when integration broke down.
int cmd_run(const Scenario& s, const std::filesystem::path& out, std::ostream& log,
            std::optional<std::uint64_t> seed = std::nullopt);

/// Recomputes the summary from <out>/<name>.csv and prints it.
int cmd_metrics(const Scenario& s, const std::filesystem::path& out, std::ostream& log);

/// Maps the exception in flight to an exit code and prints its message.
int report_exception(std::ostream& err);

}  // namespace alip
