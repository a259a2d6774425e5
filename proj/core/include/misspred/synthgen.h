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
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Cholesky>

#include "misspred/common.h"
#include "misspred/dataset.h"

namespace misspred {

enum class CovarianceKind { ar_pos, ar_neg, compound_symmetric, toeplitz, scaled_identity };

struct CovarianceSpec {
  CovarianceKind kind = CovarianceKind::scaled_identity;
  Index p = 10;
  double rho = 0.0;
  double scale = 1.0;

  // rho = 0.5 (ar_pos, compound_symmetric), -0.5 (ar_neg), 0 otherwise;
  // scale = 1.
  static CovarianceSpec with_defaults(CovarianceKind kind, Index p);
};

enum class RegressionKind { linear, polynomial, trigonometric, non_continuous };

struct RegressionModel {
  RegressionKind kind = RegressionKind::linear;
  Vector beta0;

  // beta0 = [2, 4, 2, -3, 1, 7, -4, 0, 0, 0] for p = 10; for other p the
  // pattern is truncated or zero-padded.
  static RegressionModel with_default_beta(RegressionKind kind, Index p);
};

struct SynthConfig {
  Index n = 500;
  CovarianceSpec cov;
  RegressionModel model;
  double target_sn = 1.0;
  std::uint64_t seed = 0;
  // Skips calibration and uses this noise variance (0 gives y = m(x)).
  std::optional<double> noise_variance;
};

inline constexpr Index kCalibrationDraws = 100000;

Matrix build_covariance(const CovarianceSpec& spec);

// n iid rows from N(0, sigma) via Cholesky factor times standard normals.
Matrix sample_gaussian(const Matrix& sigma, Index n, std::uint64_t seed);

double regression_mean(const RegressionModel& model, std::span<const double> x);

// sigma^2 = Var(m(X)) / target_sn with Var estimated from kCalibrationDraws
// fresh draws. Throws NumericalError if m is constant.
double calibrate_noise(const RegressionModel& model, const CovarianceSpec& cov,
                       double target_sn, std::uint64_t seed);

// Covariance factor, regression function and calibrated noise for one
// synthetic scenario. Sampling is deterministic per seed.
class SyntheticProblem {
 public:
  static SyntheticProblem create(const SynthConfig& config);

  DataMatrix sample(Index n, std::uint64_t seed) const;

  double noise_variance() const { return sigma2_; }
  const Matrix& covariance() const { return sigma_; }
  const RegressionModel& model() const { return model_; }
  Index dim() const { return sigma_.rows(); }

 private:
  SyntheticProblem(Matrix sigma, Matrix chol, RegressionModel model, double sigma2)
      : sigma_(std::move(sigma)), chol_(std::move(chol)), model_(std::move(model)), sigma2_(sigma2) {}

  Matrix sigma_;
  Matrix chol_;
  RegressionModel model_;
  double sigma2_;
};

struct GeneratedData {
  DataMatrix data;
  double noise_variance;
};

GeneratedData generate(const SynthConfig& config);

std::string_view to_string(CovarianceKind kind);
std::string_view to_string(RegressionKind kind);
CovarianceKind parse_covariance_kind(std::string_view name);
RegressionKind parse_regression_kind(std::string_view name);

}  // namespace misspred
