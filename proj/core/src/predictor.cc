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

#include "misspred/predictor.h"

#include <string>

namespace misspred {

std::string_view to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::forest: return "forest";
    case PredictorKind::sgb: return "sgb";
    case PredictorKind::xgb: return "xgb";
    case PredictorKind::linear: return "linear";
  }
  return "?";
}

PredictorKind parse_predictor_kind(std::string_view name) {
  for (auto kind : {PredictorKind::forest, PredictorKind::sgb, PredictorKind::xgb, PredictorKind::linear}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown predictor '" + std::string(name) + "'");
}

double Predictor::predict(const Matrix& x, Index row) const {
  return std::visit([&](const auto& m) { return m.predict(x, row); }, model_);
}

Vector Predictor::predict(const Matrix& x) const {
  Vector out(x.rows());
  for (Index i = 0; i < x.rows(); ++i) out(i) = predict(x, i);
  return out;
}

Predictor fit_predictor(const PredictorConfig& config, const Matrix& x, const Vector& y, std::uint64_t seed) {
  switch (config.kind) {
    case PredictorKind::forest: {
      auto c = config.forest;
      c.seed = seed;
      return Predictor(fit_forest(x, y, c));
    }
    case PredictorKind::sgb: {
      auto c = config.sgb;
      c.seed = seed;
      return Predictor(fit_sgb(x, y, c));
    }
    case PredictorKind::xgb: {
      auto c = config.xgb;
      c.seed = seed;
      return Predictor(fit_xgb(x, y, c));
    }
    case PredictorKind::linear:
      return Predictor(fit_ols(x, y));
  }
  throw std::logic_error("unreachable");
}

}  // namespace misspred
