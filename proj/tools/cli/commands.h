// Copyright 2026 The qconformal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QCONFORMAL_TOOLS_CLI_COMMANDS_H_
#define QCONFORMAL_TOOLS_CLI_COMMANDS_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/run_config.h"
#include "qconformal/conformal.h"
#include "qconformal/dataset.h"
#include "qconformal/forest.h"

namespace qconformal::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  // runtime or data failure
  kExitUsage = 2,    // bad flags or config
};

struct PipelineResult {
  SplitIndices splits;
  Forest model;
  CoverageReport report;
};

// split -> fit -> evaluate with the config's fractions, seeds, forest
// parameters, alpha grid and norm.
PipelineResult run_pipeline(const Dataset& dataset, const RunConfig& config);

// Entry point behind the `qconformal` binary. `args` excludes the program
// name. Returns an ExitCode.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qconformal::cli

#endif  // QCONFORMAL_TOOLS_CLI_COMMANDS_H_
