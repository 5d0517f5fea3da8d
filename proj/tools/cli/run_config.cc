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

#include "cli/run_config.h"

#include <fstream>
#include <iterator>
#include <set>

#include "json.hpp"
#include "qconformal/errors.h"
#include "qconformal/number_format.h"

namespace qconformal::cli {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& item : j.items()) {
    if (!allowed.contains(item.key())) {
      throw ConfigError("unknown config key '" + where + item.key() + "'");
    }
  }
}

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config key '") + key + "': " + e.what());
  }
}

}  // namespace

std::vector<MeasBasis> parse_bases(std::string_view text) {
  std::vector<MeasBasis> bases;
  for (char c : text) {
    if (c == ',' || c == ' ') continue;
    const auto b = parse_basis(std::string_view(&c, 1));
    if (!b) throw ConfigError(std::string("unknown basis '") + c + "'");
    for (MeasBasis seen : bases) {
      if (seen == *b) throw ConfigError(std::string("basis '") + c + "' repeated");
    }
    bases.push_back(*b);
  }
  if (bases.empty()) throw ConfigError("no bases given");
  return bases;
}

std::string bases_text(const std::vector<MeasBasis>& bases) {
  std::string out;
  for (MeasBasis b : bases) out += static_cast<char>(std::tolower(basis_name(b)[0]));
  return out;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string_view field = text.substr(start, comma - start);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    double v = 0.0;
    if (!parse_double(field, v)) {
      throw ConfigError("bad number list '" + std::string(text) + "'");
    }
    values.push_back(v);
    start = comma + 1;
  }
  return values;
}

std::string to_json(const RunConfig& c) {
  const auto& g = c.generation;
  json gates = json::array();
  for (GateKind k : g.circuit.gate_set) gates.push_back(std::string(gate_name(k)));
  json j;
  j["data"] = c.data;
  j["generation"] = {{"num_samples", g.num_samples},
                     {"min_depth", g.circuit.min_depth},
                     {"max_depth", g.circuit.max_depth},
                     {"gate_set", gates},
                     {"two_qubit_prob", g.circuit.two_qubit_prob},
                     {"shots", g.shots},
                     {"bases", bases_text(g.bases)},
                     {"features", std::string(feature_mode_name(g.feature_mode))}};
  j["fractions"] = {{"train", c.fractions.train},
                    {"cal", c.fractions.cal},
                    {"test", c.fractions.test}};
  j["alphas"] = c.alphas;
  j["norm"] = std::string(norm_name(c.norm));
  j["forest"] = {{"num_trees", c.forest.num_trees},
                 {"max_depth", c.forest.max_depth},
                 {"min_samples_split", c.forest.min_samples_split},
                 {"min_samples_leaf", c.forest.min_samples_leaf},
                 {"bootstrap", c.forest.bootstrap},
                 {"max_features", c.forest.max_features}};
  j["seeds"] = {{"generation", c.seeds.generation},
                {"split", c.seeds.split},
                {"train", c.seeds.train}};
  j["output"] = {{"dataset", c.output.dataset},
                 {"report", c.output.report},
                 {"model", c.output.model}};
  j["run_id"] = c.run_id;
  return j.dump(2) + "\n";
}

RunConfig overlay_json(const RunConfig& base, std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, {"data", "generation", "fractions", "alphas", "norm", "forest", "seeds",
                 "output", "run_id"},
             "");
  RunConfig c = base;
  take(j, "data", c.data);
  take(j, "run_id", c.run_id);
  take(j, "alphas", c.alphas);
  if (j.contains("norm")) {
    std::string name;
    take(j, "norm", name);
    const auto norm = parse_norm(name);
    if (!norm) throw ConfigError("unknown norm '" + name + "'");
    c.norm = *norm;
  }
  if (j.contains("generation")) {
    const json& g = j["generation"];
    check_keys(g, {"num_samples", "min_depth", "max_depth", "gate_set", "two_qubit_prob",
                   "shots", "bases", "features"},
               "generation.");
    auto& gc = c.generation;
    take(g, "num_samples", gc.num_samples);
    take(g, "min_depth", gc.circuit.min_depth);
    take(g, "max_depth", gc.circuit.max_depth);
    take(g, "two_qubit_prob", gc.circuit.two_qubit_prob);
    take(g, "shots", gc.shots);
    if (g.contains("gate_set")) {
      std::vector<std::string> names;
      take(g, "gate_set", names);
      gc.circuit.gate_set.clear();
      for (const auto& name : names) {
        const auto k = parse_gate_kind(name);
        if (!k) throw ConfigError("unknown gate '" + name + "'");
        gc.circuit.gate_set.push_back(*k);
      }
    }
    if (g.contains("bases")) {
      std::string text;
      take(g, "bases", text);
      gc.bases = parse_bases(text);
    }
    if (g.contains("features")) {
      std::string name;
      take(g, "features", name);
      const auto mode = parse_feature_mode(name);
      if (!mode) throw ConfigError("unknown feature mode '" + name + "'");
      gc.feature_mode = *mode;
    }
  }
  if (j.contains("fractions")) {
    const json& f = j["fractions"];
    check_keys(f, {"train", "cal", "test"}, "fractions.");
    take(f, "train", c.fractions.train);
    take(f, "cal", c.fractions.cal);
    take(f, "test", c.fractions.test);
  }
  if (j.contains("forest")) {
    const json& f = j["forest"];
    check_keys(f, {"num_trees", "max_depth", "min_samples_split", "min_samples_leaf",
                   "bootstrap", "max_features"},
               "forest.");
    take(f, "num_trees", c.forest.num_trees);
    take(f, "max_depth", c.forest.max_depth);
    take(f, "min_samples_split", c.forest.min_samples_split);
    take(f, "min_samples_leaf", c.forest.min_samples_leaf);
    take(f, "bootstrap", c.forest.bootstrap);
    take(f, "max_features", c.forest.max_features);
  }
  if (j.contains("seeds")) {
    const json& s = j["seeds"];
    check_keys(s, {"generation", "split", "train"}, "seeds.");
    take(s, "generation", c.seeds.generation);
    take(s, "split", c.seeds.split);
    take(s, "train", c.seeds.train);
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    check_keys(o, {"dataset", "report", "model"}, "output.");
    take(o, "dataset", c.output.dataset);
    take(o, "report", c.output.report);
    take(o, "model", c.output.model);
  }
  return c;
}

RunConfig load_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path);
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return overlay_json(base, text);
}

}  // namespace qconformal::cli
