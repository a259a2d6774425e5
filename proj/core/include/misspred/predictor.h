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
#include <string_view>
#include <variant>

#include "misspred/boosting.h"
#include "misspred/forest.h"
#include "misspred/linear.h"

namespace misspred {

enum class PredictorKind { forest, sgb, xgb, linear };

std::string_view to_string(PredictorKind kind);
PredictorKind parse_predictor_kind(std::string_view name);

// Hyperparameters for every prediction model; `kind` picks which applies.
struct PredictorConfig {
  PredictorKind kind = PredictorKind::forest;
  ForestConfig forest;
  SgbConfig sgb;
  XgbConfig xgb;
};

// A fitted prediction model of any kind.
class Predictor {
 public:
  using Model = std::variant<ForestModel, BoostModel, LinearModel>;

  explicit Predictor(Model model) : model_(std::move(model)) {}

  double predict(const Matrix& x, Index row) const;
  Vector predict(const Matrix& x) const;
  const Model& model() const { return model_; }

 private:
  Model model_;
};

// Fits the configured model. `seed` overrides the seed stored in the config
// so callers can give every fit its own stream. Only the xgb kind accepts
// NaN covariates.
Predictor fit_predictor(const PredictorConfig& config, const Matrix& x, const Vector& y, std::uint64_t seed);

}  // namespace misspred
