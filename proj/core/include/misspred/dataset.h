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
#include <filesystem>
#include <string>
#include <vector>

#include "misspred/common.h"

namespace misspred {

class MissMask;

// Regression data set: covariates `x` (n x p), response `y` (n).
struct DataMatrix {
  Matrix x;
  Vector y;
  std::vector<std::string> col_names;

  Index rows() const { return x.rows(); }
  Index cols() const { return x.cols(); }

  // Throws std::invalid_argument when shapes disagree, y has non-finite
  // entries, or x has non-finite entries outside the cells `mask` marks as
  // missing (any non-finite entry when `mask` is null).
  void validate(const MissMask* mask = nullptr) const;
};

// Observation indicator: true = observed, false = missing. Every row and every
// column keeps at least one observed cell.
class MissMask {
 public:
  explicit MissMask(MaskArray observed);

  static MissMask all_observed(Index rows, Index cols);

  Index rows() const { return observed_.rows(); }
  Index cols() const { return observed_.cols(); }
  bool observed(Index i, Index j) const { return observed_(i, j); }
  bool missing(Index i, Index j) const { return !observed_(i, j); }
  Index missing_count() const { return missing_count_; }
  Index missing_in_col(Index j) const;
  const MaskArray& array() const { return observed_; }

  // Copy of `x` with every missing cell replaced by NaN.
  Matrix apply(const Matrix& x) const;

  bool operator==(const MissMask& other) const;

 private:
  MaskArray observed_;
  Index missing_count_ = 0;
};

struct CsvOptions {
  std::string response;
  char delimiter = ',';
  // 0 reads every data row.
  std::int64_t max_rows = 0;
};

// Reads a headered numeric CSV. The response column becomes `y`; the
// remaining columns, in file order, become `x`. Throws ParseError.
DataMatrix load_csv(const std::filesystem::path& path, const CsvOptions& options);

// Writes covariates followed by the response column named `response_name`,
// using shortest round-trip formatting.
void write_csv(const std::filesystem::path& path, const DataMatrix& data,
               const std::string& response_name = "y", char delimiter = ',');

// Centers and scales every covariate column to unit sample variance.
// Constant columns are only centered.
DataMatrix standardize_covariates(const DataMatrix& data);

struct FoldAssignment {
  std::vector<int> fold_of;
  int k = 0;

  std::vector<Index> test_rows(int fold) const;
  std::vector<Index> train_rows(int fold) const;
  Index fold_size(int fold) const;
};

// Permutation-based balanced partition of 0..n-1 into k folds.
FoldAssignment make_folds(Index n, int k, std::uint64_t seed);

// Copies the listed rows of `x` (or `y`).
Matrix select_rows(const Matrix& x, const std::vector<Index>& rows);
Vector select_rows(const Vector& y, const std::vector<Index>& rows);

}  // namespace misspred
