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
#include <string_view>
#include <vector>

#include "misspred/forest.h"
#include "misspred/linear.h"

namespace misspred {

enum class IntervalKind { qrf, emp_q, res_var, m_correct, weighted, ols };

std::string_view to_string(IntervalKind kind);
IntervalKind parse_interval_kind(std::string_view name);

struct PredictionInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  IntervalKind kind = IntervalKind::emp_q;

  double length() const { return upper - lower; }
  bool contains(double y) const { return lower <= y && y <= upper; }
};

enum class VarianceKind { simple, mcorrect, weighted };

// Out-of-bag residual summaries of a fitted forest.
struct ResidualStats {
  std::vector<double> oob_residuals;  // y_i - oob_mean_i over valid rows, row order
  std::vector<Index> oob_counts;      // OOB tree count for the same rows
  double sigma2_simple = 0.0;         // mean squared OOB residual
  double sigma2_mcorrect = 0.0;       // max(0, simple - mean tree variance / M)
  double sigma2_weighted = 0.0;       // OOB-count weighted mean squared residual
  double mean_tree_variance = 0.0;    // averaged over rows with >= 2 OOB trees

  double variance(VarianceKind kind) const;
};

// Throws NumericalError when fewer than two rows have an OOB prediction.
ResidualStats residual_stats(const ForestModel& model, const Matrix& x, const Vector& y);

// Quantile regression forest interval [Q(alpha/2), Q(1 - alpha/2)] of the
// forest-weighted conditional CDF; bounds are training responses.
PredictionInterval pi_qrf(const ForestModel& model, std::span<const double> query, double level = 0.95);

// Forest prediction plus type-1 quantiles of the OOB residuals.
PredictionInterval pi_emp_q(const ForestModel& model, const ResidualStats& stats, std::span<const double> query,
                            double level = 0.95);

// Forest prediction +/- z_{1 - alpha/2} * sigma for the selected residual
// variance estimate.
PredictionInterval pi_gaussian(const ForestModel& model, const ResidualStats& stats,
                               std::span<const double> query, double level, VarianceKind variance);

// Classical t interval of the linear model at query point x:
// x~'b +/- t_{1 - alpha/2, n - p - 1} sqrt(s^2 (1 + x~' (X'X)^-1 x~)).
PredictionInterval pi_ols(const LinearModel& model, std::span<const double> query, double level = 0.95);

}  // namespace misspred
