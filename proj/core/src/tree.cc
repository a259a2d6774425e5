/*
 * Copyright 2026 The misspred Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "misspred/tree.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace misspred {
namespace {

// Relative improvement below which a split is treated as no improvement.
constexpr double kMinRelativeGain = 1e-10;

struct Split {
  bool found = false;
  int var = -1;
  double threshold = 0.0;
  bool default_left = false;
  double gain = 0.0;
};

class Builder {
 public:
  Builder(const Matrix& x, const Vector& target, const TreeConfig& config, Rng& rng)
      : x_(x), target_(target), config_(config), rng_(rng) {
    features_.resize(static_cast<std::size_t>(x.cols()));
  }

  std::vector<TreeNode> run(std::vector<Index> rows) {
    build(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  int build(std::vector<Index> rows, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    const auto n = static_cast<double>(rows.size());
    double sum = 0.0;
    for (Index r : rows) sum += target_(r);
    const double mean = sum / n;
    double sse = 0.0;
    for (Index r : rows) sse += (target_(r) - mean) * (target_(r) - mean);

    const auto count = static_cast<Index>(rows.size());
    const bool splittable = count >= 2 * config_.min_node_size &&
                            (config_.max_depth < 0 || depth < config_.max_depth) && sse > 0.0;
    Split split;
    if (splittable) split = find_split(rows, sum, sse);
    if (!split.found) {
      auto& leaf = nodes_[static_cast<std::size_t>(id)];
      leaf.value = sum / (n + config_.lambda);
      leaf.members = std::move(rows);
      return id;
    }

    std::vector<Index> left;
    std::vector<Index> right;
    for (Index r : rows) {
      const double v = x_(r, split.var);
      const bool go_left = std::isnan(v) ? split.default_left : v <= split.threshold;
      (go_left ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    {
      auto& node = nodes_[static_cast<std::size_t>(id)];
      node.split_var = split.var;
      node.threshold = split.threshold;
      node.default_left = split.default_left;
      node.value = sum / (n + config_.lambda);
    }
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    nodes_[static_cast<std::size_t>(id)].left = l;
    nodes_[static_cast<std::size_t>(id)].right = r;
    return id;
  }

  std::vector<int> candidate_features() {
    const auto p = static_cast<int>(x_.cols());
    std::iota(features_.begin(), features_.end(), 0);
    const auto mtry = config_.mtry <= 0 ? p : static_cast<int>(std::min<Index>(config_.mtry, p));
    if (mtry < p) {
      for (int k = 0; k < mtry; ++k) {
        std::uniform_int_distribution<int> pick(k, p - 1);
        std::swap(features_[static_cast<std::size_t>(k)], features_[static_cast<std::size_t>(pick(rng_))]);
      }
    }
    std::vector<int> chosen(features_.begin(), features_.begin() + mtry);
    std::sort(chosen.begin(), chosen.end());
    return chosen;
  }

  Split find_split(const std::vector<Index>& rows, double total_sum, double sse) {
    const double lambda = config_.lambda;
    const auto n_total = static_cast<double>(rows.size());
    const double parent_score = total_sum * total_sum / (n_total + lambda);
    const auto min_size = static_cast<double>(config_.min_node_size);
    Split best;

    auto consider = [&](int var, double threshold, bool default_left, double sl, double nl, double sr,
                        double nr) {
      if (nl < min_size || nr < min_size) return;
      const double gain = sl * sl / (nl + lambda) + sr * sr / (nr + lambda) - parent_score;
      if (gain > best.gain) {
        best.gain = gain;
        best.var = var;
        best.threshold = threshold;
        best.default_left = default_left;
        best.found = true;
      }
    };

    for (int var : candidate_features()) {
      scratch_.clear();
      double miss_sum = 0.0;
      double miss_n = 0.0;
      for (Index r : rows) {
        const double v = x_(r, var);
        if (std::isnan(v)) {
          if (!config_.allow_missing) throw std::invalid_argument("fit_tree: missing covariate value");
          miss_sum += target_(r);
          miss_n += 1.0;
        } else {
          scratch_.emplace_back(v, target_(r));
        }
      }
      if (scratch_.size() < 2) continue;
      std::sort(scratch_.begin(), scratch_.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      const double obs_sum = total_sum - miss_sum;
      const auto obs_n = static_cast<double>(scratch_.size());
      const bool try_left = miss_n > 0.0 && config_.learn_default_direction;

      double left_sum = 0.0;
      double left_n = 0.0;
      for (std::size_t i = 0; i + 1 < scratch_.size(); ++i) {
        left_sum += scratch_[i].second;
        left_n += 1.0;
        const double lo = scratch_[i].first;
        const double hi = scratch_[i + 1].first;
        if (!(lo < hi)) continue;
        double threshold = lo + 0.5 * (hi - lo);
        if (threshold >= hi) threshold = lo;
        const double right_sum = obs_sum - left_sum;
        const double right_n = obs_n - left_n;
        consider(var, threshold, false, left_sum, left_n, right_sum + miss_sum, right_n + miss_n);
        if (try_left) {
          consider(var, threshold, true, left_sum + miss_sum, left_n + miss_n, right_sum, right_n);
        }
      }
    }
    if (best.found && !(best.gain > kMinRelativeGain * sse)) best.found = false;
    return best;
  }

  const Matrix& x_;
  const Vector& target_;
  const TreeConfig& config_;
  Rng& rng_;
  std::vector<TreeNode> nodes_;
  std::vector<int> features_;
  std::vector<std::pair<double, double>> scratch_;
};

}  // namespace

TreeModel::TreeModel(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw std::invalid_argument("TreeModel: no nodes");
}

template <class ValueAt>
int TreeModel::descend(ValueAt&& value_at) const {
  int id = 0;
  while (!nodes_[static_cast<std::size_t>(id)].is_leaf()) {
    const auto& node = nodes_[static_cast<std::size_t>(id)];
    const double v = value_at(node.split_var);
    const bool go_left = std::isnan(v) ? node.default_left : v <= node.threshold;
    id = go_left ? node.left : node.right;
  }
  return id;
}

int TreeModel::leaf_index(std::span<const double> query) const {
  return descend([&](int var) { return query[static_cast<std::size_t>(var)]; });
}

int TreeModel::leaf_index(const Matrix& x, Index row) const {
  return descend([&](int var) { return x(row, var); });
}

int TreeModel::leaf_count() const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

int TreeModel::depth() const {
  std::vector<int> depth_of(nodes_.size(), 0);
  int deepest = 0;
  for (std::size_t id = 0; id < nodes_.size(); ++id) {
    const auto& node = nodes_[id];
    deepest = std::max(deepest, depth_of[id]);
    if (!node.is_leaf()) {
      depth_of[static_cast<std::size_t>(node.left)] = depth_of[id] + 1;
      depth_of[static_cast<std::size_t>(node.right)] = depth_of[id] + 1;
    }
  }
  return deepest;
}

TreeModel fit_tree(const Matrix& x, const Vector& target, std::span<const Index> rows,
                   const TreeConfig& config, Rng& rng) {
  if (rows.empty()) throw std::invalid_argument("fit_tree: no rows");
  if (x.cols() < 1) throw std::invalid_argument("fit_tree: no features");
  if (target.size() != x.rows()) throw std::invalid_argument("fit_tree: target length differs from row count");
  if (config.min_node_size < 1) throw std::invalid_argument("fit_tree: min_node_size must be >= 1");
  Builder builder(x, target, config, rng);
  return TreeModel(builder.run(std::vector<Index>(rows.begin(), rows.end())));
}

}  // namespace misspred
