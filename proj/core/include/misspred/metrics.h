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

#include "misspred/dataset.h"
#include "misspred/intervals.h"
#include "misspred/predictor.h"

namespace misspred {

// Imputation error over the missing cells N_mis:
//   sqrt(sum (imp - true)^2) / sqrt(sum (imp - mean(true))^2),
// where mean(true) is taken over all missing cells together. Throws
// ZeroDenominatorError when the denominator vanishes and
// std::invalid_argument when no cell is missing.
double nrmse(const Matrix& imputed, const Matrix& truth, const MissMask& mask);

// Conventional normalization: the denominator is centered true values,
//   sqrt(sum (imp - true)^2) / sqrt(sum (true - mean(true))^2).
double nrmse_true_centered(const Matrix& imputed, const Matrix& truth, const MissMask& mask);

// k-fold cross-validated MSE: each fold is predicted by a model trained on
// the other folds; returns the mean of all n held-out squared errors. Fold f
// trains with seed derive_seed(seed, f).
double cv_mse(const DataMatrix& data, const PredictorConfig& learner, const FoldAssignment& folds,
              std::uint64_t seed = 0);

struct CoverageRecord {
  bool covered = false;
  double length = 0.0;
  IntervalKind kind = IntervalKind::emp_q;
  Index iterate = 0;

  static CoverageRecord from(const PredictionInterval& pi, double y, Index iterate);
};

struct CoverageSummary {
  double coverage_rate = 0.0;
  double mean_length = 0.0;
  double median_length = 0.0;
  Index count = 0;
};

CoverageSummary coverage_summary(std::span<const CoverageRecord> records);

}  // namespace misspred
