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

#ifndef QCONFORMAL_TOOLS_CLI_REPORT_IO_H_
#define QCONFORMAL_TOOLS_CLI_REPORT_IO_H_

#include <cstddef>
#include <string>
#include <string_view>

#include "cli/run_config.h"
#include "qconformal/conformal.h"
#include "qconformal/dataset.h"

namespace qconformal::cli {

inline constexpr int kReportSchemaVersion = 1;

struct ReportDocument {
  std::string run_id;
  CoverageReport report;
  std::size_t n_train = 0;
};

// Full report record. Infinite values are written as null. The dataset
// manifest is echoed without generated_at and the config without file
// paths, so identical seeds give identical bytes regardless of where or
// when the run happened.
std::string report_json(const ReportDocument& doc, const Dataset& dataset,
                        const RunConfig& config);

// Throws FormatError on malformed JSON or a schema_version other than 1.
ReportDocument parse_report_json(std::string_view text);

// Aligned text rendering of report_csv(); the cells are the same strings.
std::string report_table(const CoverageReport& report);

}  // namespace qconformal::cli

#endif  // QCONFORMAL_TOOLS_CLI_REPORT_IO_H_
