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

#include <cstdint>
#include <span>
#include <vector>

#include "misspred/common.h"
#include "misspred/tree.h"

namespace misspred {

struct ForestConfig {
  Index m_trees = 100;
  Index mtry = 0;  // 0 means max(1, floor(p / 3))
  Index min_node_size = 5;
  // false: every tree sees each training row exactly once (no OOB rows).
  bool bootstrap = true;
  std::uint64_t seed = 0;
  // Trees are grown on this many threads; results do not depend on it.
  int threads = 1;

  Index effective_mtry(Index p) const;
};

class ForestModel {
 public:
  // `inbag[t][i]` is the bootstrap multiplicity of training row i in tree t.
  ForestModel(std::vector<TreeModel> trees, std::vector<std::vector<std::uint32_t>> inbag,
              ForestConfig config, Vector y_train);

  Index tree_count() const { return static_cast<Index>(trees_.size()); }
  Index train_rows() const { return y_train_.size(); }
  const TreeModel& tree(Index t) const { return trees_[static_cast<std::size_t>(t)]; }
  std::uint32_t inbag(Index t, Index i) const {
    return inbag_[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)];
  }
  const ForestConfig& config() const { return config_; }
  const Vector& y_train() const { return y_train_; }

  double predict(std::span<const double> query) const;
  double predict(const Matrix& x, Index row) const;
  Vector predict(const Matrix& x) const;

 private:
  std::vector<TreeModel> trees_;
  std::vector<std::vector<std::uint32_t>> inbag_;
  ForestConfig config_;
  Vector y_train_;
};

// Grows config.m_trees CART trees, each on its own bootstrap sample. Tree t
// draws from the stream derive_seed(config.seed, t), so serial and threaded
// fits are bitwise identical.
ForestModel fit_forest(const Matrix& x, const Vector& y, const ForestConfig& config);

struct OobPrediction {
  Vector mean;                       // NaN where no OOB tree exists
  std::vector<Index> tree_count;     // number of OOB trees per row
  Vector tree_variance;              // sample variance of the OOB tree predictions (0 if < 2)

  bool valid(Index i) const { return tree_count[static_cast<std::size_t>(i)] > 0; }
  Index valid_count() const;
};

OobPrediction oob_predict(const ForestModel& model, const Matrix& x_train);

// Quantile-regression-forest weights over training rows: the average over
// trees of the row's in-bag multiplicity in the query's leaf, divided by the
// leaf's total in-bag count. Non-negative and summing to one.
std::vector<double> qrf_weights(const ForestModel& model, std::span<const double> query);

}  // namespace misspred
