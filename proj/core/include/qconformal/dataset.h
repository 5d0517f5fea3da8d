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

#ifndef QCONFORMAL_DATASET_H_
#define QCONFORMAL_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qconformal/features.h"
#include "qconformal/matrix.h"
#include "qconformal/qsim.h"

namespace qconformal {

inline constexpr int kDatasetFormatVersion = 1;

struct Sample {
  std::int64_t id = 0;
  std::uint64_t seed = 0;
  FeatureVector features;
  // Concatenated per-basis distributions in Z, X, Y block order.
  std::vector<double> target;

  bool operator==(const Sample&) const = default;
};

struct GenerationConfig {
  std::int64_t num_samples = 5000;
  CircuitConfig circuit;
  int shots = 1024;
  std::vector<MeasBasis> bases{MeasBasis::Z};
  FeatureMode feature_mode = FeatureMode::Full;

  bool operator==(const GenerationConfig&) const = default;
};

struct DatasetManifest {
  int format_version = kDatasetFormatVersion;
  int num_qubits = 2;
  GenerationConfig generation;
  std::uint64_t global_seed = 0;
  // Left empty by generate(); stamped by the caller that writes the files.
  std::string generated_at;

  std::size_t target_dim() const { return 4 * generation.bases.size(); }
  const std::vector<std::string>& feature_schema() const {
    return qconformal::feature_schema(generation.feature_mode);
  }

  bool operator==(const DatasetManifest&) const = default;
};

struct Dataset {
  DatasetManifest manifest;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
  std::size_t target_dim() const { return manifest.target_dim(); }
  std::size_t feature_dim() const { return manifest.feature_schema().size(); }

  bool operator==(const Dataset&) const = default;
};

// Throws ConfigError for an invalid circuit config, a basis list other than
// [Z] or [Z, X, Y] (any order), shots < 0 or num_samples < 1.
void validate_config(const GenerationConfig& config);

// Builds num_samples circuits from per-sample seeds derive_seed(seed, i),
// measures every basis, then drops feature duplicates (first one wins).
// Sample ids are the pre-dedup indices, so gaps mark dropped rows.
Dataset generate(const GenerationConfig& config, std::uint64_t seed);

// Throws FormatError if any stored sample breaks the dataset invariants.
void validate(const Dataset& dataset);

struct SplitFractions {
  double train = 0.70;
  double cal = 0.15;
  double test = 0.15;

  bool operator==(const SplitFractions&) const = default;
};

struct SplitIndices {
  std::vector<std::int64_t> train;
  std::vector<std::int64_t> cal;
  std::vector<std::int64_t> test;
  std::uint64_t seed = 0;
  SplitFractions fractions;

  bool operator==(const SplitIndices&) const = default;
};

// Seeded Fisher-Yates shuffle of the ids, cut at floor(f_train N) and
// floor(f_train N) + floor(f_cal N). The remainder is the test split.
SplitIndices split(const Dataset& dataset, const SplitFractions& fractions,
                   std::uint64_t seed);

struct FeatureTargetRows {
  Matrix X;
  Matrix Y;
};

// Rows for the given ids, in the order given. Throws InputError for an
// unknown id.
FeatureTargetRows gather(const Dataset& dataset, std::span<const std::int64_t> ids);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// Canonical data file: header `id,seed,<schema...>,y_0..y_{d-1}` and one
// line per sample, '\n' terminated, numbers in shortest round-trip form.
std::string to_csv(const Dataset& dataset);

// "fnv1a64:<16 hex digits>" over the given CSV bytes / over to_csv(dataset).
std::string checksum_text(std::string_view csv);
std::string dataset_checksum(const Dataset& dataset);

// Manifest JSON including num_rows, data_file and the checksum of `csv`.
std::string manifest_json(const Dataset& dataset, std::string_view csv,
                          std::string_view data_file);

// Validating parse of a CSV/manifest pair; throws FormatError.
Dataset parse_dataset(std::string_view csv, std::string_view manifest);

// `prefix` names the pair <prefix>.csv and <prefix>.manifest.json; a
// trailing ".csv" on the prefix is ignored.
struct DatasetPaths {
  std::filesystem::path csv;
  std::filesystem::path manifest;
};
DatasetPaths dataset_paths(const std::filesystem::path& prefix);

void save(const Dataset& dataset, const std::filesystem::path& prefix);
Dataset load(const std::filesystem::path& prefix);

}  // namespace qconformal

#endif  // QCONFORMAL_DATASET_H_
