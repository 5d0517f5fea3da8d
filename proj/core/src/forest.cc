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

#include "qconformal/forest.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "json.hpp"
#include "qconformal/errors.h"
#include "qconformal/rng.h"

namespace qconformal {

namespace {

using nlohmann::json;

constexpr int kForestFormatVersion = 1;
constexpr double kTieTolerance = 1e-12;

// Running mean that stays exact when every input is identical.
void accumulate_mean(std::span<double> mean, std::span<const double> value,
                     std::size_t count) {
  const double inv = 1.0 / static_cast<double>(count);
  for (std::size_t j = 0; j < mean.size(); ++j) {
    mean[j] += (value[j] - mean[j]) * inv;
  }
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;  // sum_j (S_L^2 / n_L + S_R^2 / n_R); larger is better
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& X, const Matrix& Y, const ForestParams& params,
              std::uint64_t rng_seed)
      : X_(X), Y_(Y), params_(params), rng_(rng_seed), d_(Y.cols()) {}

  RegressionTree build(std::vector<std::size_t> rows) {
    rows_ = std::move(rows);
    struct Task {
      int node;
      std::size_t begin, end;
      int depth;
    };
    nodes_.emplace_back();
    std::vector<Task> stack{{0, 0, rows_.size(), 0}};
    while (!stack.empty()) {
      const Task task = stack.back();
      stack.pop_back();
      const SplitChoice split = choose_split(task.begin, task.end, task.depth);
      if (split.feature < 0) {
        make_leaf(task.node, task.begin, task.end);
        continue;
      }
      const auto first = rows_.begin() + static_cast<std::ptrdiff_t>(task.begin);
      const auto last = rows_.begin() + static_cast<std::ptrdiff_t>(task.end);
      const auto mid = std::stable_partition(first, last, [&](std::size_t r) {
        return X_(r, static_cast<std::size_t>(split.feature)) <= split.threshold;
      });
      const std::size_t middle = static_cast<std::size_t>(mid - rows_.begin());

      const int left = static_cast<int>(nodes_.size());
      nodes_.emplace_back();
      nodes_.emplace_back();
      auto& node = nodes_[static_cast<std::size_t>(task.node)];
      node.feature = split.feature;
      node.threshold = split.threshold;
      node.left = left;
      node.right = left + 1;
      stack.push_back({left + 1, middle, task.end, task.depth + 1});
      stack.push_back({left, task.begin, middle, task.depth + 1});
    }
    return RegressionTree(d_, std::move(nodes_), std::move(leaf_values_));
  }

 private:
  bool is_pure(std::size_t begin, std::size_t end) const {
    const auto first = Y_.row(rows_[begin]);
    for (std::size_t i = begin + 1; i < end; ++i) {
      if (!std::equal(first.begin(), first.end(), Y_.row(rows_[i]).begin())) return false;
    }
    return true;
  }

  void make_leaf(int node, std::size_t begin, std::size_t end) {
    nodes_[static_cast<std::size_t>(node)].leaf_offset = leaf_values_.size();
    leaf_values_.resize(leaf_values_.size() + d_, 0.0);
    std::span<double> mean(leaf_values_.data() + leaf_values_.size() - d_, d_);
    for (std::size_t i = begin; i < end; ++i) {
      accumulate_mean(mean, Y_.row(rows_[i]), i - begin + 1);
    }
  }

  std::vector<int> candidate_features() {
    const int m = static_cast<int>(X_.cols());
    std::vector<int> features(static_cast<std::size_t>(m));
    std::iota(features.begin(), features.end(), 0);
    if (params_.max_features > 0 && params_.max_features < m) {
      for (int i = 0; i < params_.max_features; ++i) {
        const auto j = i + static_cast<int>(rng_.below(static_cast<std::uint64_t>(m - i)));
        std::swap(features[static_cast<std::size_t>(i)], features[static_cast<std::size_t>(j)]);
      }
      features.resize(static_cast<std::size_t>(params_.max_features));
      std::sort(features.begin(), features.end());
    }
    return features;
  }

  SplitChoice choose_split(std::size_t begin, std::size_t end, int depth) {
    SplitChoice best;
    const std::size_t n = end - begin;
    if (n < static_cast<std::size_t>(std::max(params_.min_samples_split, 2))) return best;
    if (params_.max_depth > 0 && depth >= params_.max_depth) return best;
    if (is_pure(begin, end)) return best;

    const auto min_leaf = static_cast<std::size_t>(std::max(params_.min_samples_leaf, 1));
    std::vector<double> total(d_, 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      const auto y = Y_.row(rows_[i]);
      for (std::size_t j = 0; j < d_; ++j) total[j] += y[j];
    }

    std::vector<std::pair<double, std::size_t>> order(n);
    std::vector<double> left(d_);
    bool found = false;
    for (int f : candidate_features()) {
      const auto col = static_cast<std::size_t>(f);
      for (std::size_t i = 0; i < n; ++i) {
        order[i] = {X_(rows_[begin + i], col), rows_[begin + i]};
      }
      std::sort(order.begin(), order.end());
      if (order.front().first == order.back().first) continue;

      std::fill(left.begin(), left.end(), 0.0);
      for (std::size_t i = 0; i + 1 < n; ++i) {
        const auto y = Y_.row(order[i].second);
        for (std::size_t j = 0; j < d_; ++j) left[j] += y[j];
        if (order[i].first == order[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        const std::size_t n_right = n - n_left;
        if (n_left < min_leaf || n_right < min_leaf) continue;

        double score = 0.0;
        for (std::size_t j = 0; j < d_; ++j) {
          const double right = total[j] - left[j];
          score += left[j] * left[j] / static_cast<double>(n_left) +
                   right * right / static_cast<double>(n_right);
        }
        // Equal gains computed in different orders can differ by a few ulps;
        // treat those as ties so the lowest (feature, threshold) wins.
        if (!found || score > best.score + kTieTolerance * std::max(1.0, best.score)) {
          found = true;
          best.feature = f;
          best.score = score;
          const double lo = order[i].first;
          const double hi = order[i + 1].first;
          best.threshold = lo + (hi - lo) / 2.0;
          if (best.threshold >= hi) best.threshold = lo;
        }
      }
    }
    return best;
  }

  const Matrix& X_;
  const Matrix& Y_;
  const ForestParams& params_;
  Xoshiro256 rng_;
  std::size_t d_;
  std::vector<std::size_t> rows_;
  std::vector<RegressionTree::Node> nodes_;
  std::vector<double> leaf_values_;
};

json params_to_json(const ForestParams& p) {
  return {{"num_trees", p.num_trees},
          {"max_depth", p.max_depth},
          {"min_samples_split", p.min_samples_split},
          {"min_samples_leaf", p.min_samples_leaf},
          {"bootstrap", p.bootstrap},
          {"max_features", p.max_features}};
}

ForestParams params_from_json(const json& j) {
  ForestParams p;
  p.num_trees = j.at("num_trees").get<int>();
  p.max_depth = j.at("max_depth").get<int>();
  p.min_samples_split = j.at("min_samples_split").get<int>();
  p.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  p.max_features = j.at("max_features").get<int>();
  return p;
}

json tree_to_json(const RegressionTree& tree, int index) {
  const auto& node = tree.nodes()[static_cast<std::size_t>(index)];
  if (node.is_leaf()) {
    const auto first = tree.leaf_values().begin() + static_cast<std::ptrdiff_t>(node.leaf_offset);
    return {{"value", std::vector<double>(first, first + static_cast<std::ptrdiff_t>(tree.output_dim()))}};
  }
  return {{"feature", node.feature},
          {"threshold", node.threshold},
          {"left", tree_to_json(tree, node.left)},
          {"right", tree_to_json(tree, node.right)}};
}

// Rebuilds the flat layout in the same allocation order as TreeBuilder.
RegressionTree tree_from_json(const json& root, std::size_t output_dim) {
  std::vector<RegressionTree::Node> nodes(1);
  std::vector<double> leaf_values;
  std::vector<std::pair<const json*, int>> stack{{&root, 0}};
  while (!stack.empty()) {
    const auto [j, index] = stack.back();
    stack.pop_back();
    if (j->contains("value")) {
      const auto value = j->at("value").get<std::vector<double>>();
      if (value.size() != output_dim) throw FormatError("leaf has wrong output dimension");
      nodes[static_cast<std::size_t>(index)].leaf_offset = leaf_values.size();
      leaf_values.insert(leaf_values.end(), value.begin(), value.end());
      continue;
    }
    const int left = static_cast<int>(nodes.size());
    nodes.emplace_back();
    nodes.emplace_back();
    auto& node = nodes[static_cast<std::size_t>(index)];
    node.feature = j->at("feature").get<int>();
    node.threshold = j->at("threshold").get<double>();
    node.left = left;
    node.right = left + 1;
    stack.push_back({&j->at("right"), left + 1});
    stack.push_back({&j->at("left"), left});
  }
  return RegressionTree(output_dim, std::move(nodes), std::move(leaf_values));
}

}  // namespace

RegressionTree::RegressionTree(std::size_t output_dim, std::vector<Node> nodes,
                               std::vector<double> leaf_values)
    : output_dim_(output_dim), nodes_(std::move(nodes)), leaf_values_(std::move(leaf_values)) {}

std::span<const double> RegressionTree::predict(std::span<const double> x) const {
  const Node* node = &nodes_.front();
  while (!node->is_leaf()) {
    const bool go_left = x[static_cast<std::size_t>(node->feature)] <= node->threshold;
    node = &nodes_[static_cast<std::size_t>(go_left ? node->left : node->right)];
  }
  return {leaf_values_.data() + node->leaf_offset, output_dim_};
}

RegressionTree grow_tree(const Matrix& X, const Matrix& Y, std::vector<std::size_t> rows,
                         const ForestParams& params, std::uint64_t rng_seed) {
  if (rows.empty()) throw InputError("grow_tree: no rows");
  return TreeBuilder(X, Y, params, rng_seed).build(std::move(rows));
}

Forest Forest::fit(const Matrix& X, const Matrix& Y, const ForestParams& params,
                   std::uint64_t seed) {
  if (X.rows() == 0) throw InputError("Forest::fit: empty training set");
  if (X.rows() != Y.rows()) throw InputError("Forest::fit: X and Y row counts differ");
  if (Y.cols() == 0) throw InputError("Forest::fit: Y has no columns");
  if (params.num_trees < 1) throw InputError("Forest::fit: num_trees must be >= 1");

  Forest forest;
  forest.feature_dim_ = X.cols();
  forest.output_dim_ = Y.cols();
  forest.seed_ = seed;
  forest.params_ = params;
  const std::size_t n = X.rows();
  for (int t = 0; t < params.num_trees; ++t) {
    const std::uint64_t tree_seed = derive_seed(seed, static_cast<std::uint64_t>(t));
    Xoshiro256 rng(tree_seed);
    std::vector<std::size_t> rows(n);
    if (params.bootstrap) {
      for (auto& r : rows) r = static_cast<std::size_t>(rng.below(n));
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    forest.trees_.push_back(grow_tree(X, Y, std::move(rows), params, rng()));
  }
  return forest;
}

std::vector<double> Forest::predict(std::span<const double> x) const {
  if (x.size() != feature_dim_) {
    throw InputError("Forest::predict: expected " + std::to_string(feature_dim_) +
                     " features, got " + std::to_string(x.size()));
  }
  std::vector<double> mean(output_dim_, 0.0);
  for (std::size_t t = 0; t < trees_.size(); ++t) {
    accumulate_mean(mean, trees_[t].predict(x), t + 1);
  }
  return mean;
}

Matrix Forest::predict(const Matrix& X) const {
  Matrix out(X.rows(), output_dim_);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto y = predict(X.row(i));
    std::copy(y.begin(), y.end(), out.row(i).begin());
  }
  return out;
}

std::string Forest::to_json() const {
  json j;
  j["format"] = "qconformal-forest";
  j["version"] = kForestFormatVersion;
  j["feature_dim"] = feature_dim_;
  j["output_dim"] = output_dim_;
  j["seed"] = seed_;
  j["params"] = params_to_json(params_);
  json trees = json::array();
  for (const auto& tree : trees_) trees.push_back(tree_to_json(tree, 0));
  j["trees"] = std::move(trees);
  return j.dump();
}

Forest Forest::from_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != "qconformal-forest" ||
        j.at("version").get<int>() != kForestFormatVersion) {
      throw FormatError("not a version-1 qconformal forest");
    }
    Forest forest;
    forest.feature_dim_ = j.at("feature_dim").get<std::size_t>();
    forest.output_dim_ = j.at("output_dim").get<std::size_t>();
    forest.seed_ = j.at("seed").get<std::uint64_t>();
    forest.params_ = params_from_json(j.at("params"));
    for (const auto& t : j.at("trees")) {
      forest.trees_.push_back(tree_from_json(t, forest.output_dim_));
    }
    if (forest.trees_.empty()) throw FormatError("forest has no trees");
    return forest;
  } catch (const json::exception& e) {
    throw FormatError(std::string("forest JSON: ") + e.what());
  }
}

MseResult mse(const Matrix& Y, const Matrix& Yhat) {
  if (Y.rows() == 0) throw InputError("mse: empty input");
  if (Y.rows() != Yhat.rows() || Y.cols() != Yhat.cols()) {
    throw InputError("mse: shape mismatch");
  }
  MseResult result;
  result.per_output.assign(Y.cols(), 0.0);
  for (std::size_t i = 0; i < Y.rows(); ++i) {
    for (std::size_t j = 0; j < Y.cols(); ++j) {
      const double e = Y(i, j) - Yhat(i, j);
      result.per_output[j] += e * e;
    }
  }
  for (double& v : result.per_output) v /= static_cast<double>(Y.rows());
  result.overall = std::accumulate(result.per_output.begin(), result.per_output.end(), 0.0) /
                   static_cast<double>(Y.cols());
  return result;
}

MseResult mse(const Forest& model, const Matrix& X, const Matrix& Y) {
  return mse(Y, model.predict(X));
}

}  // namespace qconformal
