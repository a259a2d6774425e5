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

enum class BoostVariant { sgb, xgb };

// Stochastic gradient boosting with squared loss.
struct SgbConfig {
  int n_rounds = 300;
  double shrinkage = 0.05;
  double subsample = 0.5;
  int max_depth = 3;
  Index min_node_size = 10;
  std::uint64_t seed = 0;
};

// Second-order boosting with an L2 leaf penalty and learned routing of
// missing values.
struct XgbConfig {
  int n_rounds = 300;
  double shrinkage = 0.05;
  double lambda = 1.0;
  int max_depth = 4;
  double subsample = 0.8;
  Index min_node_size = 1;
  bool learn_default_direction = true;
  std::uint64_t seed = 0;
};

class BoostModel {
 public:
  BoostModel(BoostVariant variant, double base_prediction, double shrinkage, double subsample,
             double lambda, std::vector<TreeModel> trees);

  BoostVariant variant() const { return variant_; }
  double base_prediction() const { return base_; }
  double shrinkage() const { return shrinkage_; }
  double subsample() const { return subsample_; }
  double lambda() const { return lambda_; }
  const std::vector<TreeModel>& trees() const { return trees_; }

  // base_prediction + shrinkage * sum of tree outputs.
  double predict(std::span<const double> query) const;
  double predict(const Matrix& x, Index row) const;
  Vector predict(const Matrix& x) const;

 private:
  BoostVariant variant_;
  double base_;
  double shrinkage_;
  double subsample_;
  double lambda_;
  std::vector<TreeModel> trees_;
};

// Base prediction mean(y); each round fits a depth-limited tree to the
// current residuals on floor(subsample * n) rows drawn without replacement.
BoostModel fit_sgb(const Matrix& x, const Vector& y, const SgbConfig& config);

// As fit_sgb with gradient g = F - y, hessian 1: leaf value -G / (H + lambda).
// `x` may contain NaN cells; a column with no observed values never splits.
BoostModel fit_xgb(const Matrix& x, const Vector& y, const XgbConfig& config);

}  // namespace misspred
