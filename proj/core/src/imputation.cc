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

#include "misspred/imputation.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>

#include "misspred/predictor.h"
#include "misspred/seeding.h"

namespace misspred {
namespace {

// Ridge for the Bayesian regression draws, relative to the mean Gram
// diagonal.
constexpr double kMiceRidge = 1e-5;

void check_inputs(const Matrix& x, const MissMask& mask) {
  if (x.rows() != mask.rows() || x.cols() != mask.cols()) {
    throw std::invalid_argument("imputation: mask shape differs from data shape");
  }
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      if (mask.observed(i, j) && !std::isfinite(x(i, j))) {
        throw std::invalid_argument("imputation: non-finite observed cell");
      }
    }
  }
}

struct ColumnSplit {
  std::vector<Index> observed;
  std::vector<Index> missing;
};

ColumnSplit split_column(const MissMask& mask, Index j) {
  ColumnSplit s;
  for (Index i = 0; i < mask.rows(); ++i) (mask.observed(i, j) ? s.observed : s.missing).push_back(i);
  return s;
}

// Rows `rows` of `x` with column `skip` removed.
Matrix other_columns(const Matrix& x, const std::vector<Index>& rows, Index skip) {
  Matrix out(static_cast<Index>(rows.size()), x.cols() - 1);
  for (Index j = 0, c = 0; j < x.cols(); ++j) {
    if (j == skip) continue;
    for (std::size_t r = 0; r < rows.size(); ++r) out(static_cast<Index>(r), c) = x(rows[r], j);
    ++c;
  }
  return out;
}

Vector column_at(const Matrix& x, const std::vector<Index>& rows, Index j) {
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out(static_cast<Index>(r)) = x(rows[r], j);
  return out;
}

double change_statistic(const Matrix& current, const Matrix& previous, const MissMask& mask) {
  double num = 0.0;
  double den = 0.0;
  for (Index j = 0; j < mask.cols(); ++j) {
    for (Index i = 0; i < mask.rows(); ++i) {
      if (mask.observed(i, j)) continue;
      const double d = current(i, j) - previous(i, j);
      num += d * d;
      den += current(i, j) * current(i, j);
    }
  }
  if (den > 0.0) return num / den;
  return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

Matrix random_draw_fill(const Matrix& x, const MissMask& mask, Rng& rng) {
  Matrix out = x;
  for (Index j = 0; j < x.cols(); ++j) {
    const auto split = split_column(mask, j);
    if (split.missing.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, split.observed.size() - 1);
    for (Index i : split.missing) out(i, j) = x(split.observed[pick(rng)], j);
  }
  return out;
}

// Posterior draw for a normal linear regression of `target` on
// [1, covariates] with a flat prior.
struct NormDraw {
  Vector beta_hat;
  Vector beta_star;
  double sigma_star = 0.0;
};

Matrix with_intercept(const Matrix& covariates) {
  Matrix design(covariates.rows(), covariates.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(covariates.cols()) = covariates;
  return design;
}

NormDraw draw_norm(const Matrix& design, const Vector& target, Rng& rng) {
  const Index n_obs = design.rows();
  const Index q = design.cols();
  Matrix gram = design.transpose() * design;
  const double ridge = kMiceRidge * std::max(1.0, gram.diagonal().mean());
  gram.diagonal().array() += ridge;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericalError("mice: Gram factorization failed");
  const Matrix v = llt.solve(Matrix::Identity(q, q));
  NormDraw d;
  d.beta_hat = v * (design.transpose() * target);
  const double rss = (target - design * d.beta_hat).squaredNorm();
  const double df = static_cast<double>(std::max<Index>(1, n_obs - q));
  std::chi_squared_distribution<double> chi2(df);
  d.sigma_star = std::sqrt(rss / chi2(rng));
  Eigen::LLT<Matrix> v_chol(v);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(q);
  for (Index k = 0; k < q; ++k) z(k) = normal(rng);
  const Vector lz = v_chol.matrixL() * z;
  d.beta_star = d.beta_hat + d.sigma_star * lz;
  return d;
}

enum class MiceKind { norm, pmm, rf };

void mice_column(Matrix& work, const MissMask& mask, Index j, MiceKind kind, const ImputeConfig& config,
                 std::uint64_t seed) {
  const auto split = split_column(mask, j);
  if (split.missing.empty()) return;
  Rng rng(seed);
  const Vector target = column_at(work, split.observed, j);
  const Matrix cov_obs = other_columns(work, split.observed, j);
  const Matrix cov_mis = other_columns(work, split.missing, j);

  if (kind == MiceKind::rf) {
    // Without covariates the forest has nothing to split on; the random-draw
    // fill stands.
    if (cov_obs.cols() == 0) return;
    auto forest_config = config.mice_rf_forest;
    forest_config.seed = derive_seed(seed, 1);
    forest_config.mtry = 0;
    const auto forest = fit_forest(cov_obs, target, forest_config);
    std::uniform_int_distribution<Index> pick_tree(0, forest.tree_count() - 1);
    std::vector<Index> donors;
    for (std::size_t r = 0; r < split.missing.size(); ++r) {
      const auto& tree = forest.tree(pick_tree(rng));
      const auto& members = tree.node(tree.leaf_index(cov_mis, static_cast<Index>(r))).members;
      donors.assign(members.begin(), members.end());
      std::sort(donors.begin(), donors.end());
      donors.erase(std::unique(donors.begin(), donors.end()), donors.end());
      std::uniform_int_distribution<std::size_t> pick(0, donors.size() - 1);
      work(split.missing[r], j) = target(donors[pick(rng)]);
    }
    return;
  }

  const Matrix design_obs = with_intercept(cov_obs);
  const Matrix design_mis = with_intercept(cov_mis);
  const NormDraw draw = draw_norm(design_obs, target, rng);

  if (kind == MiceKind::norm) {
    std::normal_distribution<double> normal(0.0, 1.0);
    const Vector mean_mis = design_mis * draw.beta_star;
    for (std::size_t r = 0; r < split.missing.size(); ++r) {
      work(split.missing[r], j) = mean_mis(static_cast<Index>(r)) + draw.sigma_star * normal(rng);
    }
    return;
  }

  // Predictive mean matching: beta_hat for donors, beta_star for recipients.
  const Vector yhat_obs = design_obs * draw.beta_hat;
  const Vector yhat_mis = design_mis * draw.beta_star;
  const auto pool = static_cast<std::size_t>(std::min<Index>(config.pmm_donors, target.size()));
  std::vector<Index> order(static_cast<std::size_t>(target.size()));
  for (std::size_t r = 0; r < split.missing.size(); ++r) {
    const double goal = yhat_mis(static_cast<Index>(r));
    std::iota(order.begin(), order.end(), Index{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(pool), order.end(),
                      [&](Index a, Index b) {
                        const double da = std::abs(yhat_obs(a) - goal);
                        const double db = std::abs(yhat_obs(b) - goal);
                        return da < db || (da == db && a < b);
                      });
    std::uniform_int_distribution<std::size_t> pick(0, pool - 1);
    work(split.missing[r], j) = target(order[pick(rng)]);
  }
}

ImputeResult run_mice(const Matrix& x, const MissMask& mask, const ImputeConfig& config, MiceKind kind) {
  check_inputs(x, mask);
  if (config.max_iter < 1) throw std::invalid_argument("imputation: max_iter must be >= 1");
  if (config.pmm_donors < 1) throw std::invalid_argument("imputation: pmm_donors must be >= 1");
  ImputeResult result;
  if (mask.missing_count() == 0) {
    result.completed = x;
    return result;
  }
  Rng init_rng(derive_seed(config.seed, 0, "mice_init"));
  Matrix work = random_draw_fill(x, mask, init_rng);
  const auto p = static_cast<std::uint64_t>(x.cols());
  for (int sweep = 0; sweep < config.max_iter; ++sweep) {
    const Matrix previous = work;
    for (Index j = 0; j < x.cols(); ++j) {
      const auto seed = derive_seed(config.seed, static_cast<std::uint64_t>(sweep) * p + static_cast<std::uint64_t>(j));
      mice_column(work, mask, j, kind, config, seed);
    }
    result.delta_trace.push_back(change_statistic(work, previous, mask));
  }
  result.completed = std::move(work);
  result.iterations_run = config.max_iter;
  return result;
}

}  // namespace

std::string_view to_string(ImputeMethod method) {
  switch (method) {
    case ImputeMethod::mean: return "mean";
    case ImputeMethod::miss_forest: return "miss_forest";
    case ImputeMethod::gbm_impute: return "gbm_impute";
    case ImputeMethod::xgb_impute: return "xgb_impute";
    case ImputeMethod::mice_norm: return "mice_norm";
    case ImputeMethod::mice_pmm: return "mice_pmm";
    case ImputeMethod::mice_rf: return "mice_rf";
  }
  return "?";
}

ImputeMethod parse_impute_method(std::string_view name) {
  for (auto m : {ImputeMethod::mean, ImputeMethod::miss_forest, ImputeMethod::gbm_impute, ImputeMethod::xgb_impute,
                 ImputeMethod::mice_norm, ImputeMethod::mice_pmm, ImputeMethod::mice_rf}) {
    if (to_string(m) == name) return m;
  }
  throw ConfigError("unknown imputer '" + std::string(name) + "'");
}

Matrix initialize_fill(const Matrix& x, const MissMask& mask) {
  check_inputs(x, mask);
  Matrix out = x;
  for (Index j = 0; j < x.cols(); ++j) {
    double sum = 0.0;
    Index count = 0;
    for (Index i = 0; i < x.rows(); ++i) {
      if (mask.observed(i, j)) {
        sum += x(i, j);
        ++count;
      }
    }
    if (count == 0) throw std::invalid_argument("initialize_fill: column without observed cells");
    const double m = sum / static_cast<double>(count);
    for (Index i = 0; i < x.rows(); ++i) {
      if (!mask.observed(i, j)) out(i, j) = m;
    }
  }
  return out;
}

ImputeResult impute_mean(const Matrix& x, const MissMask& mask) {
  ImputeResult result;
  result.completed = initialize_fill(x, mask);
  return result;
}

ImputeResult impute_iterative(const Matrix& x, const MissMask& mask, const ImputeConfig& config) {
  PredictorConfig learner;
  switch (config.method) {
    case ImputeMethod::miss_forest:
      learner.kind = PredictorKind::forest;
      break;
    case ImputeMethod::gbm_impute:
      learner.kind = PredictorKind::sgb;
      break;
    case ImputeMethod::xgb_impute:
      learner.kind = PredictorKind::xgb;
      break;
    default:
      throw std::invalid_argument("impute_iterative: method must be miss_forest, gbm_impute or xgb_impute");
  }
  if (config.max_iter < 1) throw std::invalid_argument("imputation: max_iter must be >= 1");
  learner.forest = config.forest;
  learner.forest.mtry = 0;
  learner.sgb = config.sgb;
  learner.xgb = config.xgb;

  ImputeResult result;
  result.completed = initialize_fill(x, mask);
  // A single column has no covariates to learn from; the mean fill stands.
  if (mask.missing_count() == 0 || x.cols() < 2) return result;

  std::vector<Index> order;
  for (Index j = 0; j < x.cols(); ++j) {
    if (mask.missing_in_col(j) > 0) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return mask.missing_in_col(a) < mask.missing_in_col(b); });
  std::vector<ColumnSplit> splits(static_cast<std::size_t>(x.cols()));
  for (Index j : order) splits[static_cast<std::size_t>(j)] = split_column(mask, j);

  Matrix& work = result.completed;
  double previous_delta = std::numeric_limits<double>::infinity();
  const auto p = static_cast<std::uint64_t>(x.cols());
  for (int iter = 0; iter < config.max_iter; ++iter) {
    Matrix previous = work;
    for (Index j : order) {
      const auto& split = splits[static_cast<std::size_t>(j)];
      const auto seed = derive_seed(config.seed, static_cast<std::uint64_t>(iter) * p + static_cast<std::uint64_t>(j));
      const auto model =
          fit_predictor(learner, other_columns(work, split.observed, j), column_at(work, split.observed, j), seed);
      const Matrix cov_mis = other_columns(work, split.missing, j);
      for (std::size_t r = 0; r < split.missing.size(); ++r) {
        work(split.missing[r], j) = model.predict(cov_mis, static_cast<Index>(r));
      }
    }
    const double delta = change_statistic(work, previous, mask);
    result.delta_trace.push_back(delta);
    result.iterations_run = iter + 1;
    if (delta > previous_delta) {
      work = std::move(previous);
      result.stopped_on_increase = true;
      break;
    }
    previous_delta = delta;
  }
  return result;
}

ImputeResult mice_norm(const Matrix& x, const MissMask& mask, const ImputeConfig& config) {
  return run_mice(x, mask, config, MiceKind::norm);
}

ImputeResult mice_pmm(const Matrix& x, const MissMask& mask, const ImputeConfig& config) {
  return run_mice(x, mask, config, MiceKind::pmm);
}

ImputeResult mice_rf(const Matrix& x, const MissMask& mask, const ImputeConfig& config) {
  return run_mice(x, mask, config, MiceKind::rf);
}

ImputeResult impute(const Matrix& x, const MissMask& mask, const ImputeConfig& config) {
  switch (config.method) {
    case ImputeMethod::mean:
      return impute_mean(x, mask);
    case ImputeMethod::miss_forest:
    case ImputeMethod::gbm_impute:
    case ImputeMethod::xgb_impute:
      return impute_iterative(x, mask, config);
    case ImputeMethod::mice_norm:
      return mice_norm(x, mask, config);
    case ImputeMethod::mice_pmm:
      return mice_pmm(x, mask, config);
    case ImputeMethod::mice_rf:
      return mice_rf(x, mask, config);
  }
  throw std::logic_error("unreachable");
}

}  // namespace misspred
