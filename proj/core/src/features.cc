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

#include "qconformal/features.h"

#include <set>

namespace qconformal {

namespace {

std::vector<std::string> build_full_schema() {
  std::vector<std::string> names{"depth", "total_ops"};
  for (GateKind kind : kAllGateKinds) {
    names.push_back("count_" + std::string(gate_name(kind)));
  }
  return names;
}

}  // namespace

std::string_view feature_mode_name(FeatureMode mode) {
  return mode == FeatureMode::Minimal ? "minimal" : "full";
}

std::optional<FeatureMode> parse_feature_mode(std::string_view name) {
  if (name == "minimal") return FeatureMode::Minimal;
  if (name == "full") return FeatureMode::Full;
  return std::nullopt;
}

const std::vector<std::string>& feature_schema(FeatureMode mode) {
  static const std::vector<std::string> minimal{"depth", "total_ops"};
  static const std::vector<std::string> full = build_full_schema();
  return mode == FeatureMode::Minimal ? minimal : full;
}

FeatureVector extract(const Circuit& circuit, FeatureMode mode) {
  FeatureVector fv;
  fv.mode = mode;
  fv.values.assign(feature_schema(mode).size(), 0.0);
  fv.values[0] = static_cast<double>(circuit.depth);
  fv.values[1] = static_cast<double>(circuit.gates.size());
  if (mode == FeatureMode::Full) {
    for (const Gate& g : circuit.gates) {
      fv.values[2 + static_cast<std::size_t>(g.kind)] += 1.0;
    }
  }
  return fv;
}

std::vector<bool> first_occurrence_mask(std::span<const FeatureVector> features) {
  std::vector<bool> keep(features.size(), false);
  if (features.empty()) return keep;
  const FeatureMode mode = features.front().mode;
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].mode != mode ||
        features[i].values.size() != feature_schema(mode).size()) {
      throw SchemaError("dedup: feature vectors do not share one schema");
    }
    keep[i] = seen.insert(features[i].values).second;
  }
  return keep;
}

std::vector<LabeledFeatures> dedup(std::span<const LabeledFeatures> samples) {
  std::vector<FeatureVector> features;
  features.reserve(samples.size());
  for (const auto& s : samples) features.push_back(s.features);
  const auto keep = first_occurrence_mask(features);
  std::vector<LabeledFeatures> out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (keep[i]) out.push_back(samples[i]);
  }
  return out;
}

}  // namespace qconformal
