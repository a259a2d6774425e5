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

#include "misspred/common.h"

namespace misspred {

inline constexpr double kOlsRidge = 1e-8;

struct LinearModel {
  Vector coef;  // intercept first
  double sigma2_hat = 0.0;
  Matrix xtx_inv;  // (X~'X~ + ridge I)^-1 for the intercept-augmented design
  Index n_train = 0;

  Index dim() const { return coef.size() - 1; }
  // Residual degrees of freedom n - p - 1.
  Index df() const { return n_train - coef.size(); }
  double predict(std::span<const double> query) const;
  double predict(const Matrix& x, Index row) const;
};

// Least squares with intercept via the normal equations plus a fixed ridge
// of kOlsRidge on the Gram matrix. sigma2_hat = RSS / (n - p - 1).
LinearModel fit_ols(const Matrix& x, const Vector& y);

}  // namespace misspred
