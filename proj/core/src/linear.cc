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

#include "misspred/linear.h"

#include <stdexcept>

#include <Eigen/Cholesky>

namespace misspred {

double LinearModel::predict(std::span<const double> query) const {
  if (static_cast<Index>(query.size()) != dim()) throw std::invalid_argument("LinearModel: dimension mismatch");
  double s = coef(0);
  for (Index j = 0; j < dim(); ++j) s += coef(j + 1) * query[static_cast<std::size_t>(j)];
  return s;
}

double LinearModel::predict(const Matrix& x, Index row) const {
  return coef(0) + x.row(row).dot(coef.tail(dim()));
}

LinearModel fit_ols(const Matrix& x, const Vector& y) {
  const Index n = x.rows();
  const Index p = x.cols();
  if (y.size() != n) throw std::invalid_argument("fit_ols: y length differs from row count");
  if (n <= p + 1) throw std::invalid_argument("fit_ols: need n > p + 1");
  if (!x.allFinite() || !y.allFinite()) throw std::invalid_argument("fit_ols: non-finite input");

  Matrix design(n, p + 1);
  design.col(0).setOnes();
  design.rightCols(p) = x;
  Matrix gram = design.transpose() * design;
  gram.diagonal().array() += kOlsRidge;
  Eigen::LDLT<Matrix> ldlt(gram);
  if (ldlt.info() != Eigen::Success) throw NumericalError("fit_ols: Gram factorization failed");

  LinearModel model;
  model.n_train = n;
  model.coef = ldlt.solve(design.transpose() * y);
  model.xtx_inv = ldlt.solve(Matrix::Identity(p + 1, p + 1));
  const Vector residual = y - design * model.coef;
  model.sigma2_hat = residual.squaredNorm() / static_cast<double>(n - p - 1);
  if (!model.coef.allFinite()) throw NumericalError("fit_ols: non-finite coefficients");
  return model;
}

}  // namespace misspred
