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

#include "qconformal/dataset.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "qconformal/errors.h"
#include "qconformal/number_format.h"
#include "qconformal/rng.h"

namespace qconformal {

namespace {

using nlohmann::json;

constexpr double kSimplexTolerance = 1e-9;

std::vector<MeasBasis> canonical_bases(std::vector<MeasBasis> bases) {
  std::sort(bases.begin(), bases.end());
  return bases;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("short write to " + path.string());
}

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("manifest missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest field '") + key + "': " + e.what());
  }
}

}  // namespace

void validate_config(const GenerationConfig& config) {
  validate_config(config.circuit);
  if (config.num_samples < 1) throw ConfigError("num_samples must be >= 1");
  if (config.shots < 0) throw ConfigError("shots must be >= 0");
  const auto bases = canonical_bases(config.bases);
  const bool single = bases == std::vector<MeasBasis>{MeasBasis::Z};
  const bool triple =
      bases == std::vector<MeasBasis>{MeasBasis::Z, MeasBasis::X, MeasBasis::Y};
  if (!single && !triple) throw ConfigError("bases must be [Z] or [Z, X, Y]");
}

Dataset generate(const GenerationConfig& config, std::uint64_t seed) {
  validate_config(config);
  Dataset dataset;
  dataset.manifest.generation = config;
  dataset.manifest.generation.bases = canonical_bases(config.bases);
  dataset.manifest.global_seed = seed;
  const auto& bases = dataset.manifest.generation.bases;

  std::vector<Sample> all;
  all.reserve(static_cast<std::size_t>(config.num_samples));
  for (std::int64_t i = 0; i < config.num_samples; ++i) {
    Sample s;
    s.id = i;
    s.seed = derive_seed(seed, static_cast<std::uint64_t>(i));
    const Circuit circuit = random_circuit(config.circuit, derive_seed(s.seed, 0));
    s.features = extract(circuit, config.feature_mode);
    for (MeasBasis b : bases) {
      // Sub-seed follows the basis itself, not its position in the list.
      const auto sub = derive_seed(s.seed, 1 + static_cast<std::uint64_t>(b));
      const auto dist = measure(circuit, b, config.shots, sub);
      s.target.insert(s.target.end(), dist.p.begin(), dist.p.end());
    }
    all.push_back(std::move(s));
  }

  std::vector<FeatureVector> features;
  features.reserve(all.size());
  for (const auto& s : all) features.push_back(s.features);
  const auto keep = first_occurrence_mask(features);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (keep[i]) dataset.samples.push_back(std::move(all[i]));
  }
  return dataset;
}

void validate(const Dataset& dataset) {
  const auto& m = dataset.manifest;
  if (m.format_version != kDatasetFormatVersion) {
    throw FormatError("unsupported format_version " + std::to_string(m.format_version));
  }
  if (m.num_qubits != 2) throw FormatError("num_qubits must be 2");
  try {
    validate_config(m.generation);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
  if (canonical_bases(m.generation.bases) != m.generation.bases) {
    throw FormatError("manifest bases are not in Z, X, Y order");
  }
  const std::size_t d = m.target_dim();
  const std::size_t feature_dim = m.feature_schema().size();
  std::int64_t previous_id = -1;
  for (const Sample& s : dataset.samples) {
    const std::string where = "sample " + std::to_string(s.id) + ": ";
    if (s.id <= previous_id) throw FormatError(where + "ids not strictly increasing");
    previous_id = s.id;
    if (s.features.mode != m.generation.feature_mode ||
        s.features.values.size() != feature_dim) {
      throw FormatError(where + "feature schema mismatch");
    }
    for (double v : s.features.values) {
      if (!(v >= 0.0) || v != std::floor(v)) {
        throw FormatError(where + "feature values must be non-negative integers");
      }
    }
    if (s.target.size() != d) {
      throw FormatError(where + "expected " + std::to_string(d) + " target values, got " +
                        std::to_string(s.target.size()));
    }
    for (std::size_t block = 0; block < d; block += 4) {
      double sum = 0.0;
      for (std::size_t k = block; k < block + 4; ++k) {
        if (!(s.target[k] >= 0.0 && s.target[k] <= 1.0)) {
          throw FormatError(where + "target value outside [0, 1]");
        }
        sum += s.target[k];
      }
      if (std::abs(sum - 1.0) > kSimplexTolerance) {
        throw FormatError(where + "basis block does not sum to 1");
      }
    }
  }
}

SplitIndices split(const Dataset& dataset, const SplitFractions& fractions,
                   std::uint64_t seed) {
  const std::size_t n = dataset.samples.size();
  if (n < 3) throw SizeError("split needs at least 3 samples, got " + std::to_string(n));
  if (!(fractions.train > 0.0 && fractions.cal > 0.0 && fractions.test > 0.0) ||
      std::abs(fractions.train + fractions.cal + fractions.test - 1.0) > 1e-9) {
    throw InputError("split fractions must be positive and sum to 1");
  }

  std::vector<std::int64_t> ids;
  ids.reserve(n);
  for (const auto& s : dataset.samples) ids.push_back(s.id);
  Xoshiro256 rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) {
    std::swap(ids[i], ids[rng.below(i + 1)]);
  }

  // The 1e-9 slack keeps products such as 0.7 * 30 = 20.999... from
  // losing a row to representation error.
  const auto floor_count = [n](double f) {
    return static_cast<std::size_t>(std::floor(f * static_cast<double>(n) + 1e-9));
  };
  const std::size_t n_train = std::min(floor_count(fractions.train), n);
  const std::size_t n_cal = std::min(floor_count(fractions.cal), n - n_train);

  SplitIndices out;
  out.seed = seed;
  out.fractions = fractions;
  out.train.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.cal.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train),
                 ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_cal));
  out.test.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_cal), ids.end());
  return out;
}

FeatureTargetRows gather(const Dataset& dataset, std::span<const std::int64_t> ids) {
  std::unordered_map<std::int64_t, std::size_t> position;
  position.reserve(dataset.samples.size());
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    position.emplace(dataset.samples[i].id, i);
  }
  FeatureTargetRows rows{Matrix(0, dataset.feature_dim()), Matrix(0, dataset.target_dim())};
  for (std::int64_t id : ids) {
    const auto it = position.find(id);
    if (it == position.end()) throw InputError("unknown sample id " + std::to_string(id));
    const Sample& s = dataset.samples[it->second];
    rows.X.push_row(s.features.values);
    rows.Y.push_row(s.target);
  }
  return rows;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string to_csv(const Dataset& dataset) {
  std::string out = "id,seed";
  for (const auto& name : dataset.manifest.feature_schema()) out += "," + name;
  for (std::size_t j = 0; j < dataset.target_dim(); ++j) {
    out += ",y_" + std::to_string(j);
  }
  out += '\n';
  for (const Sample& s : dataset.samples) {
    out += std::to_string(s.id);
    out += ',';
    out += std::to_string(s.seed);
    for (double v : s.features.values) out += "," + format_double(v);
    for (double v : s.target) out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

std::string checksum_text(std::string_view csv) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(csv)));
  return buf;
}

std::string dataset_checksum(const Dataset& dataset) { return checksum_text(to_csv(dataset)); }

std::string manifest_json(const Dataset& dataset, std::string_view csv,
                          std::string_view data_file) {
  const auto& m = dataset.manifest;
  const auto& g = m.generation;
  json j;
  j["format_version"] = m.format_version;
  j["num_qubits"] = m.num_qubits;
  json bases = json::array();
  for (MeasBasis b : g.bases) bases.push_back(std::string(basis_name(b)));
  j["bases"] = bases;
  j["shots"] = g.shots;
  json gates = json::array();
  for (GateKind k : g.circuit.gate_set) gates.push_back(std::string(gate_name(k)));
  j["gate_set"] = gates;
  j["two_qubit_prob"] = g.circuit.two_qubit_prob;
  j["min_depth"] = g.circuit.min_depth;
  j["max_depth"] = g.circuit.max_depth;
  j["feature_mode"] = std::string(feature_mode_name(g.feature_mode));
  j["feature_schema"] = m.feature_schema();
  j["num_samples"] = g.num_samples;
  j["num_rows"] = dataset.samples.size();
  j["target_dim"] = m.target_dim();
  j["global_seed"] = m.global_seed;
  j["generated_at"] = m.generated_at;
  j["data_file"] = std::string(data_file);
  j["checksum"] = checksum_text(csv);
  return j.dump(2) + "\n";
}

Dataset parse_dataset(std::string_view csv, std::string_view manifest_text) {
  json j;
  try {
    j = json::parse(manifest_text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("manifest is not valid JSON: ") + e.what());
  }

  Dataset dataset;
  auto& m = dataset.manifest;
  m.format_version = require<int>(j, "format_version");
  if (m.format_version != kDatasetFormatVersion) {
    throw FormatError("unsupported format_version " + std::to_string(m.format_version));
  }
  if (require<std::string>(j, "checksum") != checksum_text(csv)) {
    throw FormatError("data file checksum mismatch");
  }
  m.num_qubits = require<int>(j, "num_qubits");
  auto& g = m.generation;
  g.bases.clear();
  for (const auto& name : require<std::vector<std::string>>(j, "bases")) {
    const auto b = parse_basis(name);
    if (!b) throw FormatError("unknown basis '" + name + "'");
    g.bases.push_back(*b);
  }
  g.shots = require<int>(j, "shots");
  g.circuit.gate_set.clear();
  for (const auto& name : require<std::vector<std::string>>(j, "gate_set")) {
    const auto k = parse_gate_kind(name);
    if (!k) throw FormatError("unknown gate '" + name + "'");
    g.circuit.gate_set.push_back(*k);
  }
  g.circuit.two_qubit_prob = require<double>(j, "two_qubit_prob");
  g.circuit.min_depth = require<int>(j, "min_depth");
  g.circuit.max_depth = require<int>(j, "max_depth");
  const auto mode = parse_feature_mode(require<std::string>(j, "feature_mode"));
  if (!mode) throw FormatError("unknown feature_mode");
  g.feature_mode = *mode;
  if (require<std::vector<std::string>>(j, "feature_schema") != m.feature_schema()) {
    throw FormatError("feature_schema does not match feature_mode");
  }
  g.num_samples = require<std::int64_t>(j, "num_samples");
  m.global_seed = require<std::uint64_t>(j, "global_seed");
  m.generated_at = require<std::string>(j, "generated_at");
  const auto num_rows = require<std::size_t>(j, "num_rows");
  if (require<std::size_t>(j, "target_dim") != m.target_dim()) {
    throw FormatError("target_dim does not match bases");
  }

  std::string expected_header = "id,seed";
  for (const auto& name : m.feature_schema()) expected_header += "," + name;
  const std::size_t feature_dim = m.feature_schema().size();

  if (csv.empty() || csv.back() != '\n') throw FormatError("data file is truncated");
  std::size_t pos = csv.find('\n');
  const std::string_view header = csv.substr(0, pos);
  const auto header_fields = split_fields(header);
  if (header.substr(0, std::min(header.size(), expected_header.size())) !=
          expected_header ||
      header_fields.size() < 2 + feature_dim) {
    throw FormatError("data header does not match feature schema");
  }
  const std::size_t csv_target_dim = header_fields.size() - 2 - feature_dim;
  if (csv_target_dim != m.target_dim()) {
    throw FormatError("data has " + std::to_string(csv_target_dim) +
                      " target columns but manifest bases imply " +
                      std::to_string(m.target_dim()));
  }
  for (std::size_t j2 = 0; j2 < csv_target_dim; ++j2) {
    if (header_fields[2 + feature_dim + j2] != "y_" + std::to_string(j2)) {
      throw FormatError("bad target column name in header");
    }
  }

  ++pos;
  std::size_t line_no = 1;
  while (pos < csv.size()) {
    const std::size_t end = csv.find('\n', pos);
    const std::string_view line = csv.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto fields = split_fields(line);
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() != header_fields.size()) {
      throw FormatError(where + "expected " + std::to_string(header_fields.size()) +
                        " fields, got " + std::to_string(fields.size()));
    }
    Sample s;
    if (!parse_int64(fields[0], s.id)) throw FormatError(where + "bad id");
    if (!parse_uint64(fields[1], s.seed)) throw FormatError(where + "bad seed");
    s.features.mode = g.feature_mode;
    s.features.values.resize(feature_dim);
    for (std::size_t k = 0; k < feature_dim; ++k) {
      if (!parse_double(fields[2 + k], s.features.values[k])) {
        throw FormatError(where + "bad feature value");
      }
    }
    s.target.resize(csv_target_dim);
    for (std::size_t k = 0; k < csv_target_dim; ++k) {
      if (!parse_double(fields[2 + feature_dim + k], s.target[k])) {
        throw FormatError(where + "bad target value");
      }
    }
    dataset.samples.push_back(std::move(s));
  }
  if (dataset.samples.size() != num_rows) {
    throw FormatError("manifest says " + std::to_string(num_rows) + " rows, data has " +
                      std::to_string(dataset.samples.size()));
  }
  validate(dataset);
  return dataset;
}

DatasetPaths dataset_paths(const std::filesystem::path& prefix) {
  std::filesystem::path base = prefix;
  if (base.extension() == ".csv") base.replace_extension();
  DatasetPaths paths;
  paths.csv = base;
  paths.csv += ".csv";
  paths.manifest = base;
  paths.manifest += ".manifest.json";
  return paths;
}

void save(const Dataset& dataset, const std::filesystem::path& prefix) {
  validate(dataset);
  const auto paths = dataset_paths(prefix);
  if (paths.csv.has_parent_path()) {
    std::filesystem::create_directories(paths.csv.parent_path());
  }
  const std::string csv = to_csv(dataset);
  write_file(paths.csv, csv);
  write_file(paths.manifest,
             manifest_json(dataset, csv, paths.csv.filename().string()));
}

Dataset load(const std::filesystem::path& prefix) {
  const auto paths = dataset_paths(prefix);
  const std::string manifest = read_file(paths.manifest);
  const std::string csv = read_file(paths.csv);
  return parse_dataset(csv, manifest);
}

}  // namespace qconformal
