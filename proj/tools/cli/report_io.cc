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

#include "cli/report_io.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "json.hpp"
#include "qconformal/errors.h"

namespace qconformal::cli {

namespace {

using nlohmann::json;

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  return j.get<double>();
}

json manifest_echo(const Dataset& dataset) {
  const auto& m = dataset.manifest;
  const auto& g = m.generation;
  json bases = json::array();
  for (MeasBasis b : g.bases) bases.push_back(std::string(basis_name(b)));
  json gates = json::array();
  for (GateKind k : g.circuit.gate_set) gates.push_back(std::string(gate_name(k)));
  return {{"format_version", m.format_version},
          {"num_qubits", m.num_qubits},
          {"bases", bases},
          {"shots", g.shots},
          {"gate_set", gates},
          {"two_qubit_prob", g.circuit.two_qubit_prob},
          {"min_depth", g.circuit.min_depth},
          {"max_depth", g.circuit.max_depth},
          {"feature_mode", std::string(feature_mode_name(g.feature_mode))},
          {"feature_schema", m.feature_schema()},
          {"num_samples", g.num_samples},
          {"num_rows", dataset.samples.size()},
          {"global_seed", m.global_seed},
          {"checksum", dataset_checksum(dataset)}};
}

json config_echo(const RunConfig& c) {
  return {{"fractions", {{"train", c.fractions.train}, {"cal", c.fractions.cal},
                         {"test", c.fractions.test}}},
          {"alphas", c.alphas},
          {"norm", std::string(norm_name(c.norm))},
          {"forest", {{"num_trees", c.forest.num_trees},
                      {"max_depth", c.forest.max_depth},
                      {"min_samples_split", c.forest.min_samples_split},
                      {"min_samples_leaf", c.forest.min_samples_leaf},
                      {"bootstrap", c.forest.bootstrap},
                      {"max_features", c.forest.max_features}}},
          {"seeds", {{"generation", c.seeds.generation},
                     {"split", c.seeds.split},
                     {"train", c.seeds.train}}}};
}

}  // namespace

std::string report_json(const ReportDocument& doc, const Dataset& dataset,
                        const RunConfig& config) {
  const auto& r = doc.report;
  json rows = json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"alpha", row.alpha},
                    {"tau", number(row.tau)},
                    {"coverage", row.coverage},
                    {"sum_size", number(row.sum_size)},
                    {"volume", number(row.volume)}});
  }
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["run_id"] = doc.run_id;
  j["norm"] = std::string(norm_name(r.norm));
  j["d"] = r.dim;
  j["n_train"] = doc.n_train;
  j["n_cal"] = r.n_cal;
  j["n_test"] = r.n_test;
  j["mse_overall"] = r.mse_overall;
  j["mse_per_output"] = r.mse_per_output;
  j["rows"] = std::move(rows);
  j["dataset"] = manifest_echo(dataset);
  j["config"] = config_echo(config);
  return j.dump(2) + "\n";
}

ReportDocument parse_report_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kReportSchemaVersion) {
      throw FormatError("unsupported report schema_version");
    }
    ReportDocument doc;
    doc.run_id = j.at("run_id").get<std::string>();
    doc.n_train = j.at("n_train").get<std::size_t>();
    auto& r = doc.report;
    const auto norm = parse_norm(j.at("norm").get<std::string>());
    if (!norm) throw FormatError("unknown norm in report");
    r.norm = *norm;
    r.dim = j.at("d").get<std::size_t>();
    r.n_cal = j.at("n_cal").get<std::size_t>();
    r.n_test = j.at("n_test").get<std::size_t>();
    r.mse_overall = j.at("mse_overall").get<double>();
    r.mse_per_output = j.at("mse_per_output").get<std::vector<double>>();
    for (const auto& row : j.at("rows")) {
      r.rows.push_back({row.at("alpha").get<double>(), number_from(row.at("tau")),
                        row.at("coverage").get<double>(), number_from(row.at("sum_size")),
                        number_from(row.at("volume"))});
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report JSON: ") + e.what());
  }
}

std::string report_table(const CoverageReport& report) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> header;
  std::string_view h = kReportCsvHeader;
  for (std::size_t start = 0; start <= h.size();) {
    const std::size_t comma = std::min(h.find(',', start), h.size());
    header.emplace_back(h.substr(start, comma - start));
    start = comma + 1;
  }
  lines.push_back(header);
  for (auto& cells : report_cells(report)) lines.push_back(std::move(cells));

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::string out;
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i) out += "  ";
      out += line[i];
      if (i + 1 < line.size()) out.append(width[i] - line[i].size(), ' ');
    }
    out += '\n';
  }
  return out;
}

}  // namespace qconformal::cli
