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

#include "misspred/synthgen.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "misspred/seeding.h"

namespace misspred {
namespace {

Matrix cholesky_factor(const Matrix& sigma) {
  if (sigma.rows() < 1 || sigma.rows() != sigma.cols()) {
    throw std::invalid_argument("covariance must be a non-empty square matrix");
  }
  Eigen::LLT<Matrix> llt(sigma);
  if (llt.info() != Eigen::Success) throw NumericalError("covariance matrix is not positive definite");
  return llt.matrixL();
}

Matrix draw_rows(const Matrix& chol, Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index p = chol.rows();
  Matrix z(p, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) z(j, i) = normal(rng);
  }
  return (chol.triangularView<Eigen::Lower>() * z).transpose();
}

}  // namespace

CovarianceSpec CovarianceSpec::with_defaults(CovarianceKind kind, Index p) {
  CovarianceSpec spec;
  spec.kind = kind;
  spec.p = p;
  switch (kind) {
    case CovarianceKind::ar_pos:
    case CovarianceKind::compound_symmetric:
      spec.rho = 0.5;
      break;
    case CovarianceKind::ar_neg:
      spec.rho = -0.5;
      break;
    default:
      break;
  }
  return spec;
}

RegressionModel RegressionModel::with_default_beta(RegressionKind kind, Index p) {
  static constexpr double kBeta[] = {2, 4, 2, -3, 1, 7, -4, 0, 0, 0};
  RegressionModel model;
  model.kind = kind;
  model.beta0 = Vector::Zero(p);
  for (Index j = 0; j < std::min<Index>(p, 10); ++j) model.beta0(j) = kBeta[j];
  return model;
}

Matrix build_covariance(const CovarianceSpec& spec) {
  const Index p = spec.p;
  if (p < 1) throw std::invalid_argument("build_covariance: p must be >= 1");
  const bool uses_rho = spec.kind == CovarianceKind::ar_pos || spec.kind == CovarianceKind::ar_neg ||
                        spec.kind == CovarianceKind::compound_symmetric;
  if (uses_rho && !(std::abs(spec.rho) < 1.0)) throw std::invalid_argument("build_covariance: |rho| must be < 1");

  Matrix sigma(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      const auto lag = static_cast<double>(std::abs(i - j));
      switch (spec.kind) {
        case CovarianceKind::ar_pos:
        case CovarianceKind::ar_neg:
          sigma(i, j) = std::pow(spec.rho, lag);
          break;
        case CovarianceKind::compound_symmetric:
          sigma(i, j) = i == j ? 1.0 : spec.rho;
          break;
        case CovarianceKind::toeplitz:
          sigma(i, j) = std::max(0.0, 1.0 - lag / static_cast<double>(p));
          break;
        case CovarianceKind::scaled_identity:
          sigma(i, j) = i == j ? spec.scale : 0.0;
          break;
      }
    }
  }
  cholesky_factor(sigma);
  return sigma;
}

Matrix sample_gaussian(const Matrix& sigma, Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_gaussian: n must be >= 1");
  const Matrix chol = cholesky_factor(sigma);
  Rng rng(seed);
  return draw_rows(chol, n, rng);
}

double regression_mean(const RegressionModel& model, std::span<const double> x) {
  const auto& beta = model.beta0;
  if (static_cast<Index>(x.size()) != beta.size()) {
    throw std::invalid_argument("regression_mean: dimension mismatch");
  }
  const auto p = x.size();
  double linear = 0.0;
  for (std::size_t j = 0; j < p; ++j) linear += beta(static_cast<Index>(j)) * x[j];

  switch (model.kind) {
    case RegressionKind::linear:
      return linear;
    case RegressionKind::polynomial: {
      double s = 0.0;
      for (std::size_t j = 0; j < p; ++j) {
        s += beta(static_cast<Index>(j)) * std::pow(x[j], static_cast<double>(j + 1));
      }
      return s;
    }
    case RegressionKind::trigonometric:
      return 2.0 * std::sin(linear + 2.0);
    case RegressionKind::non_continuous: {
      if (p < 5) throw std::invalid_argument("regression_mean: non_continuous needs p >= 5");
      if (x[2] > 0.5) return beta(0) * x[0] + beta(1) * x[1] + beta(2) * x[2];
      return beta(3) * x[3] + beta(4) * x[4] + 3.0;
    }
  }
  throw std::logic_error("unreachable");
}

double calibrate_noise(const RegressionModel& model, const CovarianceSpec& cov,
                       double target_sn, std::uint64_t seed) {
  if (!(target_sn > 0.0)) throw std::invalid_argument("calibrate_noise: target_sn must be > 0");
  const Matrix chol = cholesky_factor(build_covariance(cov));
  Rng rng(derive_seed(seed, 0, "calibrate_noise"));
  const Matrix draws = draw_rows(chol, kCalibrationDraws, rng);
  std::vector<double> signal(static_cast<std::size_t>(kCalibrationDraws));
  std::vector<double> row(static_cast<std::size_t>(draws.cols()));
  for (Index i = 0; i < draws.rows(); ++i) {
    for (Index j = 0; j < draws.cols(); ++j) row[static_cast<std::size_t>(j)] = draws(i, j);
    signal[static_cast<std::size_t>(i)] = regression_mean(model, row);
  }
  double m = 0.0;
  for (double s : signal) m += s;
  m /= static_cast<double>(signal.size());
  double ss = 0.0;
  for (double s : signal) ss += (s - m) * (s - m);
  const double var = ss / static_cast<double>(signal.size() - 1);
  if (!(var > 0.0)) throw NumericalError("calibrate_noise: regression function has zero variance");
  return var / target_sn;
}

SyntheticProblem SyntheticProblem::create(const SynthConfig& config) {
  if (config.n < 2) throw std::invalid_argument("SynthConfig: n must be >= 2");
  if (!(config.target_sn > 0.0)) throw std::invalid_argument("SynthConfig: target_sn must be > 0");
  if (config.model.beta0.size() != config.cov.p) {
    throw std::invalid_argument("SynthConfig: beta0 length differs from covariance dimension");
  }
  Matrix sigma = build_covariance(config.cov);
  Matrix chol = cholesky_factor(sigma);
  double sigma2 = 0.0;
  if (config.noise_variance) {
    if (*config.noise_variance < 0.0) throw std::invalid_argument("SynthConfig: negative noise variance");
    sigma2 = *config.noise_variance;
  } else {
    sigma2 = calibrate_noise(config.model, config.cov, config.target_sn, config.seed);
  }
  return SyntheticProblem(std::move(sigma), std::move(chol), config.model, sigma2);
}

DataMatrix SyntheticProblem::sample(Index n, std::uint64_t seed) const {
  if (n < 1) throw std::invalid_argument("SyntheticProblem::sample: n must be >= 1");
  Rng x_rng(derive_seed(seed, 0, "covariates"));
  Rng noise_rng(derive_seed(seed, 0, "noise"));
  DataMatrix data;
  data.x = draw_rows(chol_, n, x_rng);
  data.y.resize(n);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double sd = std::sqrt(sigma2_);
  std::vector<double> row(static_cast<std::size_t>(dim()));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < dim(); ++j) row[static_cast<std::size_t>(j)] = data.x(i, j);
    data.y(i) = regression_mean(model_, row) + sd * noise(noise_rng);
  }
  for (Index j = 0; j < dim(); ++j) data.col_names.push_back("x" + std::to_string(j + 1));
  return data;
}

GeneratedData generate(const SynthConfig& config) {
  const auto problem = SyntheticProblem::create(config);
  return {problem.sample(config.n, config.seed), problem.noise_variance()};
}

std::string_view to_string(CovarianceKind kind) {
  switch (kind) {
    case CovarianceKind::ar_pos: return "ar_pos";
    case CovarianceKind::ar_neg: return "ar_neg";
    case CovarianceKind::compound_symmetric: return "compound_symmetric";
    case CovarianceKind::toeplitz: return "toeplitz";
    case CovarianceKind::scaled_identity: return "scaled_identity";
  }
  return "?";
}

std::string_view to_string(RegressionKind kind) {
  switch (kind) {
    case RegressionKind::linear: return "linear";
    case RegressionKind::polynomial: return "polynomial";
    case RegressionKind::trigonometric: return "trigonometric";
    case RegressionKind::non_continuous: return "non_continuous";
  }
  return "?";
}

CovarianceKind parse_covariance_kind(std::string_view name) {
  for (auto kind : {CovarianceKind::ar_pos, CovarianceKind::ar_neg, CovarianceKind::compound_symmetric,
                    CovarianceKind::toeplitz, CovarianceKind::scaled_identity}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown covariance structure '" + std::string(name) + "'");
}

RegressionKind parse_regression_kind(std::string_view name) {
  for (auto kind : {RegressionKind::linear, RegressionKind::polynomial, RegressionKind::trigonometric,
                    RegressionKind::non_continuous}) {
    if (to_string(kind) == name) return kind;
  }
  throw ConfigError("unknown regression model '" + std::string(name) + "'");
}

}  // namespace misspred
