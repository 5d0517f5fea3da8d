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

#ifndef QCONFORMAL_FOREST_H_
#define QCONFORMAL_FOREST_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qconformal/matrix.h"

namespace qconformal {

struct ForestParams {
  int num_trees = 100;
  int max_depth = 0;  // 0 = grow until pure or too small
  int min_samples_split = 2;
  int min_samples_leaf = 1;
  bool bootstrap = true;
  int max_features = 0;  // 0 = consider every feature at every node

  bool operator==(const ForestParams&) const = default;
};

// Multi-output CART regression tree stored as a flat node array. Node 0 is
// the root. Samples with x[feature] <= threshold go left.
class RegressionTree {
 public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::size_t leaf_offset = 0;  // into leaf_values, output_dim entries

    bool is_leaf() const { return feature < 0; }
    bool operator==(const Node&) const = default;
  };

  RegressionTree() = default;
  RegressionTree(std::size_t output_dim, std::vector<Node> nodes,
                 std::vector<double> leaf_values);

  // Leaf mean reached by x.
  std::span<const double> predict(std::span<const double> x) const;

  std::size_t output_dim() const { return output_dim_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<double>& leaf_values() const { return leaf_values_; }
  std::size_t num_leaves() const { return leaf_values_.size() / output_dim_; }

  bool operator==(const RegressionTree&) const = default;

 private:
  std::size_t output_dim_ = 0;
  std::vector<Node> nodes_;
  std::vector<double> leaf_values_;
};

// Grows one tree on the given row multiset (indices into X/Y; repeats
// allowed). Splits minimise the summed per-output squared error of the two
// children; thresholds are midpoints of consecutive distinct values; ties
// go to the lowest feature and then the lowest threshold. `rng_seed` is
// only used when params.max_features restricts the candidate features.
RegressionTree grow_tree(const Matrix& X, const Matrix& Y,
                         std::vector<std::size_t> rows, const ForestParams& params,
                         std::uint64_t rng_seed);

class Forest {
 public:
  // Tree t uses the stream derive_seed(seed, t) for its bootstrap draw and
  // feature subsampling, so trees are independent of build order.
  // Throws InputError on empty input or mismatched row counts.
  static Forest fit(const Matrix& X, const Matrix& Y, const ForestParams& params,
                    std::uint64_t seed);

  // Mean of the trees' leaf means; not projected onto the simplex.
  // Throws InputError when x has the wrong length.
  std::vector<double> predict(std::span<const double> x) const;
  Matrix predict(const Matrix& X) const;

  std::size_t num_trees() const { return trees_.size(); }
  std::size_t feature_dim() const { return feature_dim_; }
  std::size_t output_dim() const { return output_dim_; }
  std::uint64_t seed() const { return seed_; }
  const ForestParams& params() const { return params_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }

  // Versioned JSON with trees as nested node objects.
  std::string to_json() const;
  static Forest from_json(std::string_view text);

  bool operator==(const Forest&) const = default;

 private:
  std::vector<RegressionTree> trees_;
  std::size_t feature_dim_ = 0;
  std::size_t output_dim_ = 0;
  std::uint64_t seed_ = 0;
  ForestParams params_;
};

struct MseResult {
  double overall = 0.0;
  std::vector<double> per_output;
};

// per_output[j] = mean_i (Y_ij - Yhat_ij)^2, overall = mean_j per_output[j].
MseResult mse(const Matrix& Y, const Matrix& Yhat);
MseResult mse(const Forest& model, const Matrix& X, const Matrix& Y);

}  // namespace qconformal

#endif  // QCONFORMAL_FOREST_H_
