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

#include "misspred/intervals.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "misspred/stats.h"

namespace misspred {
namespace {

double check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("interval level must lie in (0, 1)");
  return 1.0 - level;
}

}  // namespace

std::string_view to_string(IntervalKind kind) {
  switch (kind) {
    case IntervalKind::qrf: return "qrf";
    case IntervalKind::emp_q: return "emp_q";
    case IntervalKind::res_var: return "res_var";
    case IntervalKind::m_correct: return "m_correct";
    case IntervalKind::weighted: return "weighted";
    case IntervalKind::ols: return "ols";
  }
  return "?";
}

IntervalKind parse_interval_kind(std::string_view name) {
  for (auto kind : {IntervalKind::qrf, IntervalKind::emp_q, IntervalKind::res_var, IntervalKind::m_correct,
                    IntervalKind::weighted, IntervalKind::ols}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown interval kind '" + std::string(name) + "'");
}

double ResidualStats::variance(VarianceKind kind) const {
  switch (kind) {
    case VarianceKind::simple: return sigma2_simple;
    case VarianceKind::mcorrect: return sigma2_mcorrect;
    case VarianceKind::weighted: return sigma2_weighted;
  }
  throw std::logic_error("unreachable");
}

ResidualStats residual_stats(const ForestModel& model, const Matrix& x, const Vector& y) {
  if (y.size() != model.train_rows()) throw std::invalid_argument("residual_stats: y length differs from training size");
  const auto oob = oob_predict(model, x);
  ResidualStats stats;
  double tree_var_sum = 0.0;
  Index tree_var_rows = 0;
  for (Index i = 0; i < y.size(); ++i) {
    if (!oob.valid(i)) continue;
    stats.oob_residuals.push_back(y(i) - oob.mean(i));
    stats.oob_counts.push_back(oob.tree_count[static_cast<std::size_t>(i)]);
    if (oob.tree_count[static_cast<std::size_t>(i)] >= 2) {
      tree_var_sum += oob.tree_variance(i);
      ++tree_var_rows;
    }
  }
  if (stats.oob_residuals.size() < 2) throw NumericalError("residual_stats: fewer than two rows with OOB predictions");

  double ss = 0.0;
  double weighted_ss = 0.0;
  double weight_sum = 0.0;
  for (std::size_t k = 0; k < stats.oob_residuals.size(); ++k) {
    const double r2 = stats.oob_residuals[k] * stats.oob_residuals[k];
    const auto c = static_cast<double>(stats.oob_counts[k]);
    ss += r2;
    weighted_ss += c * r2;
    weight_sum += c;
  }
  stats.sigma2_simple = ss / static_cast<double>(stats.oob_residuals.size());
  stats.sigma2_weighted = weighted_ss / weight_sum;
  stats.mean_tree_variance = tree_var_rows > 0 ? tree_var_sum / static_cast<double>(tree_var_rows) : 0.0;
  stats.sigma2_mcorrect =
      std::max(0.0, stats.sigma2_simple - stats.mean_tree_variance / static_cast<double>(model.tree_count()));
  return stats;
}

PredictionInterval pi_qrf(const ForestModel& model, std::span<const double> query, double level) {
  const double alpha = check_level(level);
  const auto weights = qrf_weights(model, query);
  const Vector& y = model.y_train();
  const std::span<const double> values(y.data(), static_cast<std::size_t>(y.size()));
  PredictionInterval pi;
  pi.kind = IntervalKind::qrf;
  pi.level = level;
  pi.lower = weighted_quantile_type1(values, weights, alpha / 2.0);
  pi.upper = weighted_quantile_type1(values, weights, 1.0 - alpha / 2.0);
  return pi;
}

PredictionInterval pi_emp_q(const ForestModel& model, const ResidualStats& stats, std::span<const double> query,
                            double level) {
  const double alpha = check_level(level);
  if (stats.oob_residuals.empty()) throw NumericalError("pi_emp_q: no OOB residuals");
  std::vector<double> sorted = stats.oob_residuals;
  std::sort(sorted.begin(), sorted.end());
  const double center = model.predict(query);
  PredictionInterval pi;
  pi.kind = IntervalKind::emp_q;
  pi.level = level;
  pi.lower = center + quantile_type1_sorted(sorted, alpha / 2.0);
  pi.upper = center + quantile_type1_sorted(sorted, 1.0 - alpha / 2.0);
  return pi;
}

PredictionInterval pi_gaussian(const ForestModel& model, const ResidualStats& stats,
                               std::span<const double> query, double level, VarianceKind variance) {
  const double alpha = check_level(level);
  const double half = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(stats.variance(variance));
  const double center = model.predict(query);
  PredictionInterval pi;
  pi.level = level;
  switch (variance) {
    case VarianceKind::simple: pi.kind = IntervalKind::res_var; break;
    case VarianceKind::mcorrect: pi.kind = IntervalKind::m_correct; break;
    case VarianceKind::weighted: pi.kind = IntervalKind::weighted; break;
  }
  pi.lower = center - half;
  pi.upper = center + half;
  return pi;
}

PredictionInterval pi_ols(const LinearModel& model, std::span<const double> query, double level) {
  const double alpha = check_level(level);
  if (model.df() <= 0) throw NumericalError("pi_ols: non-positive residual degrees of freedom");
  if (static_cast<Index>(query.size()) != model.dim()) throw std::invalid_argument("pi_ols: dimension mismatch");
  Vector augmented(model.dim() + 1);
  augmented(0) = 1.0;
  for (Index j = 0; j < model.dim(); ++j) augmented(j + 1) = query[static_cast<std::size_t>(j)];
  const double leverage = augmented.dot(model.xtx_inv * augmented);
  const double t = student_t_quantile(1.0 - alpha / 2.0, static_cast<double>(model.df()));
  const double half = t * std::sqrt(model.sigma2_hat * (1.0 + leverage));
  const double center = model.predict(query);
  PredictionInterval pi;
  pi.kind = IntervalKind::ols;
  pi.level = level;
  pi.lower = center - half;
  pi.upper = center + half;
  return pi;
}

}  // namespace misspred
