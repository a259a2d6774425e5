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

#pragma once

#include <span>
#include <vector>

#include "misspred/common.h"
#include "misspred/seeding.h"

namespace misspred {

struct TreeNode {
  int split_var = -1;  // -1 marks a leaf
  double threshold = 0.0;
  bool default_left = false;  // routing for a missing split value
  int left = -1;
  int right = -1;
  double value = 0.0;
  // Training rows that reached this leaf; bootstrap duplicates are kept, so
  // `value` is the mean of the targets over this list when lambda = 0.
  std::vector<Index> members;

  bool is_leaf() const { return split_var < 0; }
};

struct TreeConfig {
  Index mtry = 0;  // features tried per split; 0 means all
  Index min_node_size = 1;
  int max_depth = -1;  // -1 means unlimited
  // L2 penalty on leaf values. Leaf value is sum(target) / (count + lambda)
  // and split gain is the matching second-order score for squared loss.
  double lambda = 0.0;
  // NaN covariates are accepted and routed along learned default directions.
  bool allow_missing = false;
  bool learn_default_direction = true;
};

// Binary regression tree. Samples go left when x[split_var] <= threshold;
// NaN follows default_left.
class TreeModel {
 public:
  TreeModel() = default;
  explicit TreeModel(std::vector<TreeNode> nodes);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }

  int leaf_index(std::span<const double> query) const;
  int leaf_index(const Matrix& x, Index row) const;
  const TreeNode& leaf(std::span<const double> query) const { return node(leaf_index(query)); }
  double predict(std::span<const double> query) const { return node(leaf_index(query)).value; }
  double predict(const Matrix& x, Index row) const { return node(leaf_index(x, row)).value; }

  int leaf_count() const;
  int depth() const;

 private:
  template <class ValueAt>
  int descend(ValueAt&& value_at) const;

  std::vector<TreeNode> nodes_;
};

// Greedy CART growth on `rows` (duplicates allowed) against `target`, which
// is indexed by the same row ids as `x`. A node is split only when it holds
// at least 2 * min_node_size rows, its depth is below max_depth, and some
// split with both children >= min_node_size strictly improves the score.
// Split candidates are midpoints of sorted distinct values; ties prefer the
// lowest feature index, then the lowest threshold.
TreeModel fit_tree(const Matrix& x, const Vector& target, std::span<const Index> rows,
                   const TreeConfig& config, Rng& rng);

}  // namespace misspred
