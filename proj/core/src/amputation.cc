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

#include "misspred/amputation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "misspred/seeding.h"

namespace misspred {

Index mcar_target_count(Index n, Index p, double rate) {
  return static_cast<Index>(std::floor(rate * static_cast<double>(n) * static_cast<double>(p) + 1e-9));
}

MissMask ampute_mcar(const DataMatrix& data, const AmputeConfig& config) {
  if (!(config.rate >= 0.0 && config.rate < 1.0)) throw std::invalid_argument("ampute_mcar: rate must lie in [0, 1)");
  const Index n = data.rows();
  const Index p = data.cols();
  if (n < 1 || p < 1) throw std::invalid_argument("ampute_mcar: empty data");
  const Index target = mcar_target_count(n, p, config.rate);
  // At least max(n, p) cells must stay observed for every row and column to
  // keep one.
  if (target > n * p - std::max(n, p)) {
    throw std::invalid_argument("ampute_mcar: missing rate leaves some row or column fully missing");
  }

  Rng rng(config.seed);
  MaskArray observed = MaskArray::Constant(n, p, true);
  std::vector<Index> cells(static_cast<std::size_t>(n * p));
  std::iota(cells.begin(), cells.end(), Index{0});
  // Partial Fisher-Yates: the first `target` slots are a uniform subset.
  for (Index k = 0; k < target; ++k) {
    std::uniform_int_distribution<Index> pick(k, n * p - 1);
    std::swap(cells[static_cast<std::size_t>(k)], cells[static_cast<std::size_t>(pick(rng))]);
    const Index cell = cells[static_cast<std::size_t>(k)];
    observed(cell % n, cell / n) = false;
  }

  for (Index i = 0; i < n; ++i) {
    if (!observed.row(i).any()) {
      std::uniform_int_distribution<Index> pick(0, p - 1);
      observed(i, pick(rng)) = true;
    }
  }
  for (Index j = 0; j < p; ++j) {
    if (!observed.col(j).any()) {
      std::uniform_int_distribution<Index> pick(0, n - 1);
      observed(pick(rng), j) = true;
    }
  }
  return MissMask(std::move(observed));
}

}  // namespace misspred
