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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qconformal/errors.h"
#include "qconformal/rng.h"
#include "test_util.h"

namespace qconformal {
namespace {

using nlohmann::json;

GenerationConfig small_config(std::int64_t n, std::vector<MeasBasis> bases) {
  GenerationConfig config;
  config.num_samples = n;
  config.bases = std::move(bases);
  config.shots = 256;
  return config;
}

// N distinct hand-built samples with uniform targets.
Dataset synthetic(std::size_t n) {
  Dataset d;
  d.manifest.generation.feature_mode = FeatureMode::Minimal;
  for (std::size_t i = 0; i < n; ++i) {
    Sample s;
    s.id = static_cast<std::int64_t>(i);
    s.seed = i;
    s.features = {FeatureMode::Minimal, {1.0, static_cast<double>(i)}};
    s.target = {0.25, 0.25, 0.25, 0.25};
    d.samples.push_back(s);
  }
  return d;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Generate, SingleBasisTargetsAreFourDim) {
  const auto d = generate(small_config(200, {MeasBasis::Z}), 3);
  EXPECT_EQ(d.target_dim(), 4u);
  for (const auto& s : d.samples) EXPECT_EQ(s.target.size(), 4u);
  EXPECT_NO_THROW(validate(d));
}

TEST(Generate, MultiBasisTargetsAreTwelveDim) {
  const auto d = generate(small_config(200, {MeasBasis::Z, MeasBasis::X, MeasBasis::Y}), 3);
  EXPECT_EQ(d.target_dim(), 12u);
  for (const auto& s : d.samples) {
    ASSERT_EQ(s.target.size(), 12u);
    for (int b = 0; b < 3; ++b) {
      double sum = 0.0;
      for (int k = 0; k < 4; ++k) {
        const double v = s.target[static_cast<std::size_t>(4 * b + k)];
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        sum += v;
      }
      EXPECT_NEAR(sum, 1.0, 1e-9);
    }
  }
}

TEST(Generate, BasisOrderIsCanonical) {
  const auto a = generate(small_config(50, {MeasBasis::Y, MeasBasis::Z, MeasBasis::X}), 9);
  const auto b = generate(small_config(50, {MeasBasis::Z, MeasBasis::X, MeasBasis::Y}), 9);
  EXPECT_EQ(a, b);
}

TEST(Generate, ZBlockMatchesSingleBasisRun) {
  const auto z = generate(small_config(300, {MeasBasis::Z}), 21);
  const auto zxy = generate(small_config(300, {MeasBasis::Z, MeasBasis::X, MeasBasis::Y}), 21);
  ASSERT_EQ(z.size(), zxy.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    EXPECT_EQ(z.samples[i].id, zxy.samples[i].id);
    EXPECT_EQ(z.samples[i].features, zxy.samples[i].features);
    const std::vector<double> head(zxy.samples[i].target.begin(),
                                   zxy.samples[i].target.begin() + 4);
    EXPECT_EQ(z.samples[i].target, head);
  }
}

TEST(Generate, SampleMatchesDirectRecomputation) {
  const auto config = small_config(100, {MeasBasis::Z, MeasBasis::X, MeasBasis::Y});
  const auto d = generate(config, 5);
  for (const auto& s : d.samples) {
    const auto c = random_circuit(config.circuit, derive_seed(s.seed, 0));
    EXPECT_EQ(s.features, extract(c, config.feature_mode));
    const auto exact_x = measure(c, MeasBasis::X, 0, 0).p;
    for (int k = 0; k < 4; ++k) {
      EXPECT_NEAR(s.target[static_cast<std::size_t>(4 + k)], exact_x[k], 0.15);
    }
  }
}

TEST(Generate, Deterministic) {
  const auto config = small_config(300, {MeasBasis::Z, MeasBasis::X, MeasBasis::Y});
  const auto a = generate(config, 77);
  const auto b = generate(config, 77);
  EXPECT_EQ(a, b);
  EXPECT_EQ(to_csv(a), to_csv(b));
  EXPECT_NE(dataset_checksum(a), dataset_checksum(generate(config, 78)));
}

TEST(Generate, IdsStrictlyIncreasingAndDeduplicated) {
  const auto d = generate(small_config(1000, {MeasBasis::Z}), 1);
  std::set<std::vector<double>> seen;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (i > 0) EXPECT_GT(d.samples[i].id, d.samples[i - 1].id);
    EXPECT_TRUE(seen.insert(d.samples[i].features.values).second);
  }
  EXPECT_LT(d.size(), 1000u);
}

TEST(Generate, ConfigErrors) {
  auto bad_depth = small_config(10, {MeasBasis::Z});
  bad_depth.circuit.min_depth = 9;
  EXPECT_THROW(generate(bad_depth, 0), ConfigError);
  EXPECT_THROW(generate(small_config(10, {MeasBasis::X}), 0), ConfigError);
  EXPECT_THROW(generate(small_config(10, {}), 0), ConfigError);
  EXPECT_THROW(generate(small_config(0, {MeasBasis::Z}), 0), ConfigError);
}

TEST(Generate, RegeneratesFromManifestAlone) {
  const auto dir = testing::scratch_dir("regen");
  const auto original = generate(small_config(150, {MeasBasis::Z, MeasBasis::X, MeasBasis::Y}), 8);
  save(original, dir / "d");
  const auto loaded = load(dir / "d");
  const auto rebuilt = generate(loaded.manifest.generation, loaded.manifest.global_seed);
  EXPECT_EQ(rebuilt.samples, original.samples);
}

TEST(Split, SizesFromFloorArithmetic) {
  const auto twenty = split(synthetic(20), {}, 1);
  EXPECT_EQ(twenty.train.size(), 14u);
  EXPECT_EQ(twenty.cal.size(), 3u);
  EXPECT_EQ(twenty.test.size(), 3u);
  const auto ten = split(synthetic(10), {}, 1);
  EXPECT_EQ(ten.train.size(), 7u);
  EXPECT_EQ(ten.cal.size(), 1u);
  EXPECT_EQ(ten.test.size(), 2u);
}

TEST(Split, SizesAgainstExactRationalOracle) {
  // 0.70 / 0.15 as 70/100 and 15/100 in integer arithmetic.
  for (std::size_t n = 3; n < 400; ++n) {
    const auto s = split(synthetic(n), {}, n);
    EXPECT_EQ(s.train.size(), 70 * n / 100) << n;
    EXPECT_EQ(s.cal.size(), 15 * n / 100) << n;
    EXPECT_EQ(s.test.size(), n - 70 * n / 100 - 15 * n / 100) << n;
  }
}

TEST(Split, DisjointAndExhaustive) {
  const auto d = synthetic(137);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto s = split(d, {}, seed);
    std::vector<std::int64_t> all;
    all.insert(all.end(), s.train.begin(), s.train.end());
    all.insert(all.end(), s.cal.begin(), s.cal.end());
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    ASSERT_EQ(all.size(), d.size());
    for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], d.samples[i].id);
  }
}

TEST(Split, DeterministicAndSeedSensitive) {
  const auto d = synthetic(50);
  EXPECT_EQ(split(d, {}, 4), split(d, {}, 4));
  EXPECT_NE(split(d, {}, 4).train, split(d, {}, 5).train);
}

TEST(Split, ShuffleIsRoughlyUniform) {
  // Each id lands in train with probability 0.7.
  const auto d = synthetic(10);
  std::array<int, 10> in_train{};
  constexpr int kSeeds = 5000;
  for (int seed = 0; seed < kSeeds; ++seed) {
    for (auto id : split(d, {}, static_cast<std::uint64_t>(seed)).train) {
      ++in_train[static_cast<std::size_t>(id)];
    }
  }
  for (int n : in_train) EXPECT_NEAR(n / double(kSeeds), 0.7, 0.03);
}

TEST(Split, Errors) {
  EXPECT_THROW(split(synthetic(2), {}, 0), SizeError);
  EXPECT_THROW(split(synthetic(10), {0.5, 0.5, 0.0}, 0), InputError);
  EXPECT_THROW(split(synthetic(10), {0.5, 0.3, 0.3}, 0), InputError);
}

TEST(Gather, RowsFollowIdOrder) {
  const auto d = synthetic(5);
  const std::vector<std::int64_t> ids{3, 0};
  const auto rows = gather(d, ids);
  ASSERT_EQ(rows.X.rows(), 2u);
  EXPECT_EQ(rows.X(0, 1), 3.0);
  EXPECT_EQ(rows.X(1, 1), 0.0);
  EXPECT_EQ(rows.Y.cols(), 4u);
  const std::vector<std::int64_t> missing{99};
  EXPECT_THROW(gather(d, missing), InputError);
}

TEST(Checksum, FnvReferenceVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(checksum_text("a"), "fnv1a64:af63dc4c8601ec8c");
}

TEST(Persistence, RoundTripTwelveDim) {
  const auto dir = testing::scratch_dir("roundtrip");
  auto d = generate(small_config(500, {MeasBasis::Z, MeasBasis::X, MeasBasis::Y}), 12);
  d.manifest.generated_at = "2026-01-01T00:00:00Z";
  save(d, dir / "run1");
  EXPECT_TRUE(std::filesystem::exists(dir / "run1.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "run1.manifest.json"));
  EXPECT_EQ(load(dir / "run1"), d);
  EXPECT_EQ(load(dir / "run1.csv"), d);
}

TEST(Persistence, RoundTripIsBitExactForAwkwardValues) {
  // Shots that are not powers of two give non-dyadic frequencies.
  auto config = small_config(200, {MeasBasis::Z, MeasBasis::X, MeasBasis::Y});
  config.shots = 1000;
  const auto d = generate(config, 2);
  const std::string csv = to_csv(d);
  EXPECT_EQ(parse_dataset(csv, manifest_json(d, csv, "x.csv")), d);
  config.shots = 0;
  const auto exact = generate(config, 2);
  const std::string csv2 = to_csv(exact);
  EXPECT_EQ(parse_dataset(csv2, manifest_json(exact, csv2, "x.csv")), exact);
}

TEST(Persistence, ManifestRecordsConfig) {
  const auto d = generate(small_config(40, {MeasBasis::Z, MeasBasis::X, MeasBasis::Y}), 6);
  const std::string csv = to_csv(d);
  const auto j = json::parse(manifest_json(d, csv, "d.csv"));
  EXPECT_EQ(j["format_version"], 1);
  EXPECT_EQ(j["num_qubits"], 2);
  EXPECT_EQ(j["bases"], json({"Z", "X", "Y"}));
  EXPECT_EQ(j["shots"], 256);
  EXPECT_EQ(j["min_depth"], 1);
  EXPECT_EQ(j["max_depth"], 8);
  EXPECT_EQ(j["gate_set"].size(), 11u);
  EXPECT_EQ(j["feature_schema"].size(), 13u);
  EXPECT_EQ(j["global_seed"], 6);
  EXPECT_EQ(j["target_dim"], 12);
  EXPECT_EQ(j["checksum"], checksum_text(csv));
}

class Tamper : public ::testing::Test {
 protected:
  void SetUp() override {
    dataset_ = generate(small_config(30, {MeasBasis::Z}), 4);
    csv_ = to_csv(dataset_);
    manifest_ = json::parse(manifest_json(dataset_, csv_, "d.csv"));
  }
  // Re-stamps the checksum so only the targeted check can fire.
  Dataset parse_resealed(const std::string& csv) {
    manifest_["checksum"] = checksum_text(csv);
    return parse_dataset(csv, manifest_.dump());
  }

  Dataset dataset_;
  std::string csv_;
  json manifest_;
};

TEST_F(Tamper, Untouched) { EXPECT_EQ(parse_resealed(csv_), dataset_); }

TEST_F(Tamper, ChecksumMismatch) {
  std::string edited = csv_;
  edited[edited.size() - 2] = edited[edited.size() - 2] == '0' ? '1' : '0';
  EXPECT_THROW(parse_dataset(edited, manifest_.dump()), FormatError);
}

TEST_F(Tamper, TruncatedFile) {
  const std::string cut = csv_.substr(0, csv_.size() - 7);
  EXPECT_THROW(parse_dataset(cut, manifest_.dump()), FormatError);
  EXPECT_THROW(parse_resealed(cut), FormatError);
  // Whole rows missing: caught by the row count.
  const std::string fewer = csv_.substr(0, csv_.rfind('\n', csv_.size() - 2) + 1);
  EXPECT_THROW(parse_resealed(fewer), FormatError);
}

TEST_F(Tamper, TwelveTargetColumnsUnderSingleBasisManifest) {
  auto multi = dataset_;
  multi.manifest.generation.bases = {MeasBasis::Z, MeasBasis::X, MeasBasis::Y};
  for (auto& s : multi.samples) {
    s.target.insert(s.target.end(), {0.25, 0.25, 0.25, 0.25, 1, 0, 0, 0});
  }
  EXPECT_THROW(parse_resealed(to_csv(multi)), FormatError);
}

TEST_F(Tamper, BrokenSimplex) {
  auto broken = dataset_;
  broken.samples[3].target[0] += 0.5;
  broken.samples[3].target[0] = std::min(broken.samples[3].target[0], 1.0);
  broken.samples[3].target[1] = 0.9;
  EXPECT_THROW(parse_resealed(to_csv(broken)), FormatError);
}

TEST_F(Tamper, WrongFormatVersion) {
  manifest_["format_version"] = 2;
  EXPECT_THROW(parse_resealed(csv_), FormatError);
}

TEST_F(Tamper, HeaderMismatch) {
  std::string edited = csv_;
  edited.replace(edited.find("count_H"), 7, "count_Q");
  EXPECT_THROW(parse_resealed(edited), FormatError);
}

TEST_F(Tamper, MalformedManifest) {
  EXPECT_THROW(parse_dataset(csv_, "{not json"), FormatError);
  manifest_.erase("shots");
  EXPECT_THROW(parse_resealed(csv_), FormatError);
}

TEST(Persistence, MissingFilesFailClosed) {
  const auto dir = testing::scratch_dir("missing");
  EXPECT_THROW(load(dir / "nope"), FormatError);
}

TEST(Persistence, SavedBytesAreStable) {
  const auto dir = testing::scratch_dir("stable");
  const auto d = generate(small_config(80, {MeasBasis::Z}), 31);
  save(d, dir / "a");
  save(d, dir / "b");
  EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
}

}  // namespace
}  // namespace qconformal
