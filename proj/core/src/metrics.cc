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

#include "misspred/metrics.h"

#include <cmath>
#include <stdexcept>

#include "misspred/seeding.h"
#include "misspred/stats.h"

namespace misspred {
namespace {

struct MissingCells {
  std::vector<double> imputed;
  std::vector<double> truth;
};

MissingCells gather(const Matrix& imputed, const Matrix& truth, const MissMask& mask) {
  if (imputed.rows() != truth.rows() || imputed.cols() != truth.cols() || mask.rows() != truth.rows() ||
      mask.cols() != truth.cols()) {
    throw std::invalid_argument("nrmse: shape mismatch");
  }
  MissingCells cells;
  for (Index j = 0; j < mask.cols(); ++j) {
    for (Index i = 0; i < mask.rows(); ++i) {
      if (mask.missing(i, j)) {
        cells.imputed.push_back(imputed(i, j));
        cells.truth.push_back(truth(i, j));
      }
    }
  }
  if (cells.truth.empty()) throw std::invalid_argument("nrmse: no missing cells");
  return cells;
}

}  // namespace

double nrmse(const Matrix& imputed, const Matrix& truth, const MissMask& mask) {
  const auto cells = gather(imputed, truth, mask);
  const double truth_mean = mean(cells.truth);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < cells.truth.size(); ++k) {
    num += (cells.imputed[k] - cells.truth[k]) * (cells.imputed[k] - cells.truth[k]);
    den += (cells.imputed[k] - truth_mean) * (cells.imputed[k] - truth_mean);
  }
  if (!(den > 0.0)) throw ZeroDenominatorError("nrmse: imputed values all equal the mean of the true values");
  return std::sqrt(num) / std::sqrt(den);
}

double nrmse_true_centered(const Matrix& imputed, const Matrix& truth, const MissMask& mask) {
  const auto cells = gather(imputed, truth, mask);
  const double truth_mean = mean(cells.truth);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < cells.truth.size(); ++k) {
    num += (cells.imputed[k] - cells.truth[k]) * (cells.imputed[k] - cells.truth[k]);
    den += (cells.truth[k] - truth_mean) * (cells.truth[k] - truth_mean);
  }
  if (!(den > 0.0)) throw ZeroDenominatorError("nrmse_true_centered: true missing values are constant");
  return std::sqrt(num) / std::sqrt(den);
}

double cv_mse(const DataMatrix& data, const PredictorConfig& learner, const FoldAssignment& folds,
              std::uint64_t seed) {
  if (static_cast<Index>(folds.fold_of.size()) != data.rows()) {
    throw std::invalid_argument("cv_mse: fold assignment length differs from row count");
  }
  double sse = 0.0;
  for (int f = 0; f < folds.k; ++f) {
    const auto train = folds.train_rows(f);
    const auto test = folds.test_rows(f);
    if (train.size() < 2) throw std::invalid_argument("cv_mse: fold with fewer than two training rows");
    if (test.empty()) continue;
    const auto model = fit_predictor(learner, select_rows(data.x, train), select_rows(data.y, train),
                                     derive_seed(seed, static_cast<std::uint64_t>(f)));
    const Matrix x_test = select_rows(data.x, test);
    for (std::size_t r = 0; r < test.size(); ++r) {
      const double e = data.y(test[r]) - model.predict(x_test, static_cast<Index>(r));
      sse += e * e;
    }
  }
  return sse / static_cast<double>(data.rows());
}

CoverageRecord CoverageRecord::from(const PredictionInterval& pi, double y, Index iterate) {
  return {pi.contains(y), pi.length(), pi.kind, iterate};
}

CoverageSummary coverage_summary(std::span<const CoverageRecord> records) {
  if (records.empty()) throw std::invalid_argument("coverage_summary: no records");
  CoverageSummary s;
  s.count = static_cast<Index>(records.size());
  std::vector<double> lengths;
  lengths.reserve(records.size());
  Index covered = 0;
  for (const auto& r : records) {
    covered += r.covered ? 1 : 0;
    lengths.push_back(r.length);
  }
  s.coverage_rate = static_cast<double>(covered) / static_cast<double>(records.size());
  s.mean_length = mean(lengths);
  s.median_length = median(std::move(lengths));
  return s;
}

}  // namespace misspred
