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

#include "misspred/boosting.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "misspred/seeding.h"

namespace misspred {
namespace {

struct RoundPlan {
  int n_rounds;
  double shrinkage;
  double subsample;
  std::uint64_t seed;
  TreeConfig tree;
};

std::vector<TreeModel> boost(const Matrix& x, const Vector& y, double base, const RoundPlan& plan) {
  const Index n = x.rows();
  const auto take = std::max<Index>(1, static_cast<Index>(std::floor(plan.subsample * static_cast<double>(n))));
  Vector fitted = Vector::Constant(n, base);
  Vector residual(n);
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index{0});
  std::vector<TreeModel> trees;
  trees.reserve(static_cast<std::size_t>(plan.n_rounds));

  for (int round = 0; round < plan.n_rounds; ++round) {
    Rng rng(derive_seed(plan.seed, static_cast<std::uint64_t>(round)));
    residual = y - fitted;
    std::vector<Index> rows = all;
    if (take < n) {
      for (Index k = 0; k < take; ++k) {
        std::uniform_int_distribution<Index> pick(k, n - 1);
        std::swap(rows[static_cast<std::size_t>(k)], rows[static_cast<std::size_t>(pick(rng))]);
      }
      rows.resize(static_cast<std::size_t>(take));
      std::sort(rows.begin(), rows.end());
    }
    TreeModel tree = fit_tree(x, residual, rows, plan.tree, rng);
    for (Index i = 0; i < n; ++i) fitted(i) += plan.shrinkage * tree.predict(x, i);
    trees.push_back(std::move(tree));
  }
  return trees;
}

void check_common(const Matrix& x, const Vector& y, int n_rounds, double shrinkage, double subsample,
                  int max_depth) {
  if (x.rows() < 1 || x.cols() < 1) throw std::invalid_argument("boosting: empty design");
  if (y.size() != x.rows()) throw std::invalid_argument("boosting: y length differs from row count");
  if (!y.allFinite()) throw std::invalid_argument("boosting: non-finite response");
  if (n_rounds < 0) throw std::invalid_argument("boosting: n_rounds must be >= 0");
  if (!(shrinkage > 0.0 && shrinkage <= 1.0)) throw std::invalid_argument("boosting: shrinkage must lie in (0, 1]");
  if (!(subsample > 0.0 && subsample <= 1.0)) throw std::invalid_argument("boosting: subsample must lie in (0, 1]");
  if (max_depth < 1) throw std::invalid_argument("boosting: max_depth must be >= 1");
}

}  // namespace

BoostModel::BoostModel(BoostVariant variant, double base_prediction, double shrinkage, double subsample,
                       double lambda, std::vector<TreeModel> trees)
    : variant_(variant),
      base_(base_prediction),
      shrinkage_(shrinkage),
      subsample_(subsample),
      lambda_(lambda),
      trees_(std::move(trees)) {}

double BoostModel::predict(std::span<const double> query) const {
  double s = 0.0;
  for (const auto& tree : trees_) s += tree.predict(query);
  return base_ + shrinkage_ * s;
}

double BoostModel::predict(const Matrix& x, Index row) const {
  double s = 0.0;
  for (const auto& tree : trees_) s += tree.predict(x, row);
  return base_ + shrinkage_ * s;
}

Vector BoostModel::predict(const Matrix& x) const {
  Vector out(x.rows());
  for (Index i = 0; i < x.rows(); ++i) out(i) = predict(x, i);
  return out;
}

BoostModel fit_sgb(const Matrix& x, const Vector& y, const SgbConfig& config) {
  check_common(x, y, config.n_rounds, config.shrinkage, config.subsample, config.max_depth);
  if (!x.allFinite()) throw std::invalid_argument("fit_sgb: missing or non-finite covariates");
  const double base = y.mean();
  RoundPlan plan{config.n_rounds, config.shrinkage, config.subsample, config.seed, {}};
  plan.tree.max_depth = config.max_depth;
  plan.tree.min_node_size = config.min_node_size;
  auto trees = boost(x, y, base, plan);
  return BoostModel(BoostVariant::sgb, base, config.shrinkage, config.subsample, 0.0, std::move(trees));
}

BoostModel fit_xgb(const Matrix& x, const Vector& y, const XgbConfig& config) {
  check_common(x, y, config.n_rounds, config.shrinkage, config.subsample, config.max_depth);
  if (!(config.lambda >= 0.0)) throw std::invalid_argument("fit_xgb: lambda must be >= 0");
  for (Index j = 0; j < x.cols(); ++j) {
    for (Index i = 0; i < x.rows(); ++i) {
      if (std::isinf(x(i, j))) throw std::invalid_argument("fit_xgb: infinite covariate");
    }
  }
  const double base = y.mean();
  RoundPlan plan{config.n_rounds, config.shrinkage, config.subsample, config.seed, {}};
  plan.tree.max_depth = config.max_depth;
  plan.tree.min_node_size = config.min_node_size;
  plan.tree.lambda = config.lambda;
  plan.tree.allow_missing = true;
  plan.tree.learn_default_direction = config.learn_default_direction;
  auto trees = boost(x, y, base, plan);
  return BoostModel(BoostVariant::xgb, base, config.shrinkage, config.subsample, config.lambda, std::move(trees));
}

}  // namespace misspred
