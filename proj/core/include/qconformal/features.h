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

#ifndef QCONFORMAL_FEATURES_H_
#define QCONFORMAL_FEATURES_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qconformal/errors.h"
#include "qconformal/qsim.h"

namespace qconformal {

enum class FeatureMode {
  Minimal,  // depth, total_ops
  Full,     // depth, total_ops, count_<kind> for every GateKind
};

std::string_view feature_mode_name(FeatureMode mode);
std::optional<FeatureMode> parse_feature_mode(std::string_view name);

// Ordered column names for a mode. Full mode lists the counts in
// kAllGateKinds order; the schema does not depend on the generator's
// gate_set so datasets from different gate sets stay comparable.
const std::vector<std::string>& feature_schema(FeatureMode mode);

// Integer-valued counts stored as doubles.
struct FeatureVector {
  FeatureMode mode = FeatureMode::Minimal;
  std::vector<double> values;

  const std::vector<std::string>& schema() const { return feature_schema(mode); }
  bool operator==(const FeatureVector&) const = default;
};

FeatureVector extract(const Circuit& circuit, FeatureMode mode);

// keep[i] is true iff no earlier vector has the same feature tuple.
// Throws SchemaError when the vectors do not share one mode.
std::vector<bool> first_occurrence_mask(std::span<const FeatureVector> features);

struct LabeledFeatures {
  FeatureVector features;
  std::vector<double> target;

  bool operator==(const LabeledFeatures&) const = default;
};

// Drops every sample whose feature tuple already appeared, keeping order.
// Targets are ignored when comparing.
std::vector<LabeledFeatures> dedup(std::span<const LabeledFeatures> samples);

}  // namespace qconformal

#endif  // QCONFORMAL_FEATURES_H_
