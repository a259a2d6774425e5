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

#include "misspred/forest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "misspred/seeding.h"

namespace misspred {

Index ForestConfig::effective_mtry(Index p) const {
  if (mtry > 0) return std::min(mtry, p);
  return std::max<Index>(1, p / 3);
}

ForestModel::ForestModel(std::vector<TreeModel> trees, std::vector<std::vector<std::uint32_t>> inbag,
                         ForestConfig config, Vector y_train)
    : trees_(std::move(trees)), inbag_(std::move(inbag)), config_(config), y_train_(std::move(y_train)) {
  if (trees_.empty()) throw std::invalid_argument("ForestModel: no trees");
  if (inbag_.size() != trees_.size()) throw std::invalid_argument("ForestModel: inbag/tree count mismatch");
  for (const auto& counts : inbag_) {
    if (static_cast<Index>(counts.size()) != y_train_.size()) {
      throw std::invalid_argument("ForestModel: inbag row count differs from training size");
    }
  }
}

double ForestModel::predict(std::span<const double> query) const {
  double s = 0.0;
  for (const auto& tree : trees_) s += tree.predict(query);
  return s / static_cast<double>(trees_.size());
}

double ForestModel::predict(const Matrix& x, Index row) const {
  double s = 0.0;
  for (const auto& tree : trees_) s += tree.predict(x, row);
  return s / static_cast<double>(trees_.size());
}

Vector ForestModel::predict(const Matrix& x) const {
  Vector out(x.rows());
  for (Index i = 0; i < x.rows(); ++i) out(i) = predict(x, i);
  return out;
}

ForestModel fit_forest(const Matrix& x, const Vector& y, const ForestConfig& config) {
  const Index n = x.rows();
  if (n < 1) throw std::invalid_argument("fit_forest: no rows");
  if (y.size() != n) throw std::invalid_argument("fit_forest: y length differs from row count");
  if (config.m_trees < 1) throw std::invalid_argument("fit_forest: m_trees must be >= 1");
  if (config.mtry < 0 || config.mtry > x.cols()) throw std::invalid_argument("fit_forest: mtry out of range");
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("fit_forest: non-finite input");

  TreeConfig tree_config;
  tree_config.mtry = config.effective_mtry(x.cols());
  tree_config.min_node_size = config.min_node_size;

  const auto m = static_cast<std::size_t>(config.m_trees);
  std::vector<TreeModel> trees(m);
  std::vector<std::vector<std::uint32_t>> inbag(m, std::vector<std::uint32_t>(static_cast<std::size_t>(n), 0));

  auto grow = [&](std::size_t t) {
    Rng rng(derive_seed(config.seed, t));
    std::vector<Index> rows(static_cast<std::size_t>(n));
    if (config.bootstrap) {
      std::uniform_int_distribution<Index> draw(0, n - 1);
      for (auto& r : rows) r = draw(rng);
      std::sort(rows.begin(), rows.end());
    } else {
      for (Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
    }
    for (Index r : rows) ++inbag[t][static_cast<std::size_t>(r)];
    trees[t] = fit_tree(x, y, rows, tree_config, rng);
  };

  const auto threads = static_cast<std::size_t>(std::max(1, config.threads));
  if (threads == 1 || m == 1) {
    for (std::size_t t = 0; t < m; ++t) grow(t);
  } else {
    std::vector<std::jthread> workers;
    for (std::size_t w = 0; w < std::min(threads, m); ++w) {
      workers.emplace_back([&, w] {
        for (std::size_t t = w; t < m; t += threads) grow(t);
      });
    }
  }
  return ForestModel(std::move(trees), std::move(inbag), config, y);
}

Index OobPrediction::valid_count() const {
  return static_cast<Index>(std::count_if(tree_count.begin(), tree_count.end(), [](Index c) { return c > 0; }));
}

OobPrediction oob_predict(const ForestModel& model, const Matrix& x_train) {
  const Index n = model.train_rows();
  if (x_train.rows() != n) throw std::invalid_argument("oob_predict: x_train row count differs from training size");
  OobPrediction out;
  out.mean = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
  out.tree_count.assign(static_cast<std::size_t>(n), 0);
  out.tree_variance = Vector::Zero(n);
  std::vector<double> preds;
  for (Index i = 0; i < n; ++i) {
    preds.clear();
    for (Index t = 0; t < model.tree_count(); ++t) {
      if (model.inbag(t, i) == 0) preds.push_back(model.tree(t).predict(x_train, i));
    }
    out.tree_count[static_cast<std::size_t>(i)] = static_cast<Index>(preds.size());
    if (preds.empty()) continue;
    // Welford updates keep the variance of identical predictions at exactly zero.
    double mean = 0.0, ss = 0.0;
    for (std::size_t k = 0; k < preds.size(); ++k) {
      const double delta = preds[k] - mean;
      mean += delta / static_cast<double>(k + 1);
      ss += delta * (preds[k] - mean);
    }
    out.mean(i) = mean;
    if (preds.size() > 1) out.tree_variance(i) = ss / static_cast<double>(preds.size() - 1);
  }
  return out;
}

std::vector<double> qrf_weights(const ForestModel& model, std::span<const double> query) {
  std::vector<double> w(static_cast<std::size_t>(model.train_rows()), 0.0);
  const double per_tree = 1.0 / static_cast<double>(model.tree_count());
  for (Index t = 0; t < model.tree_count(); ++t) {
    const auto& members = model.tree(t).leaf(query).members;
    if (members.empty()) throw NumericalError("qrf_weights: empty leaf");
    const double share = per_tree / static_cast<double>(members.size());
    for (Index r : members) w[static_cast<std::size_t>(r)] += share;
  }
  return w;
}

}  // namespace misspred
