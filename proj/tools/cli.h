// Copyright 2026 The cnnscale Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CNNSCALE_TOOLS_CLI_H_
#define CNNSCALE_TOOLS_CLI_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace cnnscale::cli {

// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kParse = 2,
  kValidation = 3,
  kInfeasible = 4,
  kCapRefused = 5,
  kIo = 6,
};

enum class Command { kValidate, kBudget, kCountSpace, kEnumerate, kSynthesize };

enum class ReportFormat { kTable, kDocument };

// Numeric options stay as text until a command needs them so that rationals
// parse exactly ("0.002", "1/500").
struct CliConfig {
  Command command = Command::kValidate;
  std::string input_path;
  std::string output_path;
  std::string report_path;

  std::optional<std::int64_t> phi;
  std::optional<std::int64_t> alpha;
  std::optional<std::int64_t> beta;
  std::optional<std::string> lambda;
  std::optional<bool> scope_aware;

  std::optional<std::string> target_fraction;
  std::string window_tolerance = "0.002";
  std::string policy = "absolute-ratio";
  std::optional<std::string> theta;
  std::string objective = "cap-maximize";
  std::uint64_t enumeration_cap = 10'000'000;
  std::int64_t quantization = 0;
  int threads = 1;
  bool emit_plans = false;
  ReportFormat format = ReportFormat::kTable;
};

// Executes one command. Artifacts go to `out` or to files, diagnostics to
// `err`.
int Run(const CliConfig& config, std::ostream& out, std::ostream& err);

// Parses argv and runs it.
int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err);

}  // namespace cnnscale::cli

#endif  // CNNSCALE_TOOLS_CLI_H_
