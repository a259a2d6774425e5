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
#include <string_view>
#include <vector>

#include "misspred/boosting.h"
#include "misspred/dataset.h"
#include "misspred/forest.h"

namespace misspred {

enum class ImputeMethod { mean, miss_forest, gbm_impute, xgb_impute, mice_norm, mice_pmm, mice_rf };

std::string_view to_string(ImputeMethod method);
ImputeMethod parse_impute_method(std::string_view name);

struct ImputeConfig {
  ImputeMethod method = ImputeMethod::miss_forest;
  int max_iter = 10;
  ForestConfig forest;  // learner for miss_forest
  SgbConfig sgb;        // learner for gbm_impute
  XgbConfig xgb;        // learner for xgb_impute
  ForestConfig mice_rf_forest = mice_rf_default_forest();
  Index pmm_donors = 5;
  std::uint64_t seed = 0;

  static ForestConfig mice_rf_default_forest() {
    ForestConfig c;
    c.m_trees = 10;
    return c;
  }
};

struct ImputeResult {
  Matrix completed;
  // Sweeps performed; equals delta_trace.size().
  int iterations_run = 0;
  // Per sweep: sum over missing cells of (X_t - X_{t-1})^2 / sum of X_t^2.
  std::vector<double> delta_trace;
  // Iterative methods only: the last sweep increased the change statistic and
  // its iterate was discarded in favor of the previous one.
  bool stopped_on_increase = false;
};

// Missing cells set to the column's observed mean. Cells of `x` under the
// mask's missing entries are never read.
Matrix initialize_fill(const Matrix& x, const MissMask& mask);

ImputeResult impute_mean(const Matrix& x, const MissMask& mask);

// missForest-style loop for miss_forest, gbm_impute and xgb_impute: columns
// visited by ascending missing count, each regressed on all others with the
// configured learner; stops at the first sweep whose change statistic
// exceeds the previous one and returns the previous iterate.
ImputeResult impute_iterative(const Matrix& x, const MissMask& mask, const ImputeConfig& config);

// Chained equations with Bayesian linear regression draws.
ImputeResult mice_norm(const Matrix& x, const MissMask& mask, const ImputeConfig& config);
// Chained equations with predictive mean matching.
ImputeResult mice_pmm(const Matrix& x, const MissMask& mask, const ImputeConfig& config);
// Chained equations with random-forest leaf donors.
ImputeResult mice_rf(const Matrix& x, const MissMask& mask, const ImputeConfig& config);

// Dispatches on config.method.
ImputeResult impute(const Matrix& x, const MissMask& mask, const ImputeConfig& config);

}  // namespace misspred
