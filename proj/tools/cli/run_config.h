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

#ifndef QCONFORMAL_TOOLS_CLI_RUN_CONFIG_H_
#define QCONFORMAL_TOOLS_CLI_RUN_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qconformal/conformal.h"
#include "qconformal/dataset.h"
#include "qconformal/forest.h"

namespace qconformal::cli {

struct Seeds {
  std::uint64_t generation = 7;
  std::uint64_t split = 1;
  std::uint64_t train = 42;

  bool operator==(const Seeds&) const = default;
};

struct OutputPaths {
  std::string dataset;           // generate: <prefix>.csv + <prefix>.manifest.json
  std::string report = "report"; // run: <prefix>.csv + <prefix>.json
  std::string model;             // run: optional forest JSON

  bool operator==(const OutputPaths&) const = default;
};

// Everything a generate or run invocation needs. Every field has a default
// and the defaulted config is a valid run.
struct RunConfig {
  std::string data;  // dataset prefix for `run`; empty = generate inline
  GenerationConfig generation;
  SplitFractions fractions;
  std::vector<double> alphas{0.05, 0.10, 0.20, 0.30, 0.50};
  NormKind norm = NormKind::L2;
  ForestParams forest;
  Seeds seeds;
  OutputPaths output;
  std::string run_id;

  bool operator==(const RunConfig&) const = default;
};

// "zxy", "z", "Z,X,Y" ... ; throws ConfigError on unknown or repeated letters.
std::vector<MeasBasis> parse_bases(std::string_view text);
std::string bases_text(const std::vector<MeasBasis>& bases);

// "0.05,0.1"; throws ConfigError on malformed numbers.
std::vector<double> parse_number_list(std::string_view text);

std::string to_json(const RunConfig& config);

// Overlays the keys present in `text` onto `base`. Unknown keys and
// wrongly typed values throw ConfigError.
RunConfig overlay_json(const RunConfig& base, std::string_view text);

RunConfig load_config_file(const std::string& path, const RunConfig& base);

}  // namespace qconformal::cli

#endif  // QCONFORMAL_TOOLS_CLI_RUN_CONFIG_H_
