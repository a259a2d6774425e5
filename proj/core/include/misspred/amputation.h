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

#include "misspred/dataset.h"

namespace misspred {

struct AmputeConfig {
  double rate = 0.0;  // in [0, 1)
  std::uint64_t seed = 0;
};

// floor(rate * n * p), the number of cells MCAR amputation masks before
// repair.
Index mcar_target_count(Index n, Index p, double rate);

// Masks exactly mcar_target_count covariate cells chosen uniformly without
// replacement, then unmasks one random cell in every fully-missing row and
// column. The response is never touched.
MissMask ampute_mcar(const DataMatrix& data, const AmputeConfig& config);

}  // namespace misspred
