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

#include <gtest/gtest.h>

#include <cmath>

#include "misspred/stats.h"
#include "misspred/synthgen.h"
#include "support/generators.h"

namespace misspred {
namespace {

Vector reference_beta() {
  Vector b(10);
  b << 2, 4, 2, -3, 1, 7, -4, 0, 0, 0;
  return b;
}

TEST(BuildCovariance, ScaledIdentity) {
  auto spec = CovarianceSpec::with_defaults(CovarianceKind::scaled_identity, 3);
  EXPECT_TRUE(build_covariance(spec).isApprox(Matrix::Identity(3, 3), 0.0));
  spec.scale = 2.5;
  EXPECT_EQ(build_covariance(spec).diagonal(), Vector::Constant(3, 2.5));
}

TEST(BuildCovariance, AutoregressivePositive) {
  const auto s = build_covariance(CovarianceSpec::with_defaults(CovarianceKind::ar_pos, 3));
  Matrix expected(3, 3);
  expected << 1, 0.5, 0.25, 0.5, 1, 0.5, 0.25, 0.5, 1;
  EXPECT_EQ(s, expected);
}

TEST(BuildCovariance, AutoregressiveNegativeDefaultsToMinusHalf) {
  const auto s = build_covariance(CovarianceSpec::with_defaults(CovarianceKind::ar_neg, 3));
  EXPECT_EQ(s(0, 1), -0.5);
  EXPECT_EQ(s(0, 2), 0.25);
}

TEST(BuildCovariance, CompoundSymmetric) {
  const auto s = build_covariance(CovarianceSpec::with_defaults(CovarianceKind::compound_symmetric, 2));
  Matrix expected(2, 2);
  expected << 1, 0.5, 0.5, 1;
  EXPECT_EQ(s, expected);
}

TEST(BuildCovariance, ToeplitzLinearDecay) {
  const auto s = build_covariance(CovarianceSpec::with_defaults(CovarianceKind::toeplitz, 4));
  EXPECT_EQ(s(0, 0), 1.0);
  EXPECT_EQ(s(0, 1), 0.75);
  EXPECT_EQ(s(0, 3), 0.25);
  EXPECT_EQ(s(3, 0), 0.25);
}

TEST(BuildCovariance, NotPositiveDefinite) {
  CovarianceSpec spec{CovarianceKind::compound_symmetric, 3, -0.5, 1.0};
  EXPECT_THROW(build_covariance(spec), NumericalError);
  spec.rho = -0.6;
  EXPECT_THROW(build_covariance(spec), NumericalError);
  spec = {CovarianceKind::ar_pos, 3, 1.0, 1.0};
  EXPECT_THROW(build_covariance(spec), std::invalid_argument);
}

TEST(BuildCovariance, CholeskyReconstructsEveryKind) {
  for (auto kind : {CovarianceKind::ar_pos, CovarianceKind::ar_neg, CovarianceKind::compound_symmetric,
                    CovarianceKind::toeplitz, CovarianceKind::scaled_identity}) {
    for (Index p : {1, 2, 5, 10, 25}) {
      const auto s = build_covariance(CovarianceSpec::with_defaults(kind, p));
      ASSERT_TRUE(s.isApprox(s.transpose(), 0.0));
      Eigen::LLT<Matrix> llt(s);
      ASSERT_EQ(llt.info(), Eigen::Success);
      const Matrix l = llt.matrixL();
      ASSERT_LE((l * l.transpose() - s).cwiseAbs().maxCoeff(), 1e-10) << to_string(kind) << " p=" << p;
      if (kind != CovarianceKind::scaled_identity) ASSERT_EQ(s.diagonal(), Vector::Ones(p));
    }
  }
}

TEST(SampleGaussian, IdentityMomentsAtTenThousand) {
  const Index n = 10000;
  const auto x = sample_gaussian(Matrix::Identity(4, 4), n, 17);
  const Vector means = x.colwise().mean();
  for (Index j = 0; j < 4; ++j) EXPECT_LT(std::abs(means(j)), 4.0 / std::sqrt(double(n)));
  const Matrix centered = x.rowwise() - means.transpose();
  const Matrix cov = centered.transpose() * centered / double(n - 1);
  EXPECT_LT((cov - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 0.1);
}

TEST(SampleGaussian, DegenerateInputsAndDeterminism) {
  EXPECT_THROW(sample_gaussian(Matrix(0, 0), 5, 1), std::invalid_argument);
  EXPECT_THROW(sample_gaussian(Matrix::Identity(2, 2), 0, 1), std::invalid_argument);
  const auto s = build_covariance(CovarianceSpec::with_defaults(CovarianceKind::ar_pos, 5));
  EXPECT_TRUE(testing::bitwise_equal(sample_gaussian(s, 30, 4), sample_gaussian(s, 30, 4)));
  EXPECT_FALSE(testing::bitwise_equal(sample_gaussian(s, 30, 4), sample_gaussian(s, 30, 5)));
}

TEST(RegressionModel, DefaultBetaForTenDimensions) {
  EXPECT_EQ(RegressionModel::with_default_beta(RegressionKind::linear, 10).beta0, reference_beta());
  const auto short_beta = RegressionModel::with_default_beta(RegressionKind::linear, 3).beta0;
  EXPECT_EQ(short_beta, (Vector(3) << 2, 4, 2).finished());
  EXPECT_EQ(RegressionModel::with_default_beta(RegressionKind::linear, 12).beta0.tail(2), Vector::Zero(2));
}

TEST(RegressionMean, LinearAtFirstBasisVector) {
  const auto m = RegressionModel::with_default_beta(RegressionKind::linear, 10);
  std::vector<double> e1(10, 0.0);
  e1[0] = 1.0;
  EXPECT_EQ(regression_mean(m, e1), 2.0);
}

TEST(RegressionMean, NonContinuousUpperBranch) {
  const auto m = RegressionModel::with_default_beta(RegressionKind::non_continuous, 10);
  std::vector<double> x(10, 0.0);
  x[0] = x[1] = x[2] = 1.0;
  EXPECT_EQ(regression_mean(m, x), 8.0);
}

TEST(RegressionMean, NonContinuousIsExactlyPiecewise) {
  const auto m = RegressionModel::with_default_beta(RegressionKind::non_continuous, 10);
  std::vector<double> x{0.3, -0.7, 0.5, 1.1, 2.0, 9, 9, 9, 9, 9};
  const double lower = -3.0 * 1.1 + 1.0 * 2.0 + 3.0;
  EXPECT_EQ(regression_mean(m, x), lower);  // x3 = 0.5 takes the <= branch
  x[2] = 0.5 - 1e-12;
  EXPECT_EQ(regression_mean(m, x), lower);
  x[2] = 0.5 + 1e-12;
  EXPECT_DOUBLE_EQ(regression_mean(m, x), 2.0 * 0.3 + 4.0 * -0.7 + 2.0 * (0.5 + 1e-12));
}

TEST(RegressionMean, TrigonometricAtOrigin) {
  const auto m = RegressionModel::with_default_beta(RegressionKind::trigonometric, 10);
  EXPECT_DOUBLE_EQ(regression_mean(m, std::vector<double>(10, 0.0)), 2.0 * std::sin(2.0));
}

TEST(RegressionMean, PolynomialUsesPowerJ) {
  const auto m = RegressionModel::with_default_beta(RegressionKind::polynomial, 10);
  Rng rng(2);
  const auto x = testing::row_vector(testing::random_matrix(1, 10, rng), 0);
  double expected = 0.0;
  for (int j = 1; j <= 10; ++j) expected += reference_beta()(j - 1) * std::pow(x[std::size_t(j - 1)], j);
  EXPECT_NEAR(regression_mean(m, x), expected, 1e-12);
}

TEST(RegressionMean, DimensionMismatch) {
  const auto m = RegressionModel::with_default_beta(RegressionKind::linear, 10);
  EXPECT_THROW(regression_mean(m, std::vector<double>(9, 0.0)), std::invalid_argument);
}

TEST(CalibrateNoise, LinearIdentityIsBetaNormSquared) {
  const auto m = RegressionModel::with_default_beta(RegressionKind::linear, 10);
  const auto cov = CovarianceSpec::with_defaults(CovarianceKind::scaled_identity, 10);
  const double bb = reference_beta().squaredNorm();
  ASSERT_EQ(bb, 99.0);
  EXPECT_NEAR(calibrate_noise(m, cov, 1.0, 5), bb, 0.02 * bb);
  EXPECT_NEAR(calibrate_noise(m, cov, 2.0, 5), bb / 2.0, 0.02 * bb / 2.0);
}

TEST(CalibrateNoise, ConstantModelIsAnError) {
  RegressionModel m{RegressionKind::linear, Vector::Zero(10)};
  EXPECT_THROW(calibrate_noise(m, CovarianceSpec::with_defaults(CovarianceKind::ar_pos, 10), 1.0, 1),
               NumericalError);
  EXPECT_THROW(calibrate_noise(RegressionModel::with_default_beta(RegressionKind::linear, 10),
                               CovarianceSpec::with_defaults(CovarianceKind::ar_pos, 10), 0.0, 1),
               std::invalid_argument);
}

SynthConfig linear_identity(Index n, std::uint64_t seed) {
  SynthConfig c;
  c.n = n;
  c.cov = CovarianceSpec::with_defaults(CovarianceKind::scaled_identity, 10);
  c.model = RegressionModel::with_default_beta(RegressionKind::linear, 10);
  c.seed = seed;
  return c;
}

TEST(Generate, NoiselessResponseEqualsMean) {
  for (auto kind : {RegressionKind::linear, RegressionKind::polynomial, RegressionKind::trigonometric,
                    RegressionKind::non_continuous}) {
    auto c = linear_identity(50, 3);
    c.model = RegressionModel::with_default_beta(kind, 10);
    c.noise_variance = 0.0;
    const auto g = generate(c);
    for (Index i = 0; i < 50; ++i) {
      ASSERT_EQ(g.data.y(i), regression_mean(c.model, testing::row_vector(g.data.x, i)));
    }
  }
}

TEST(Generate, ResponseVarianceIsTwiceSignal) {
  const auto g = generate(linear_identity(1000, 8));
  std::vector<double> y(g.data.y.data(), g.data.y.data() + g.data.y.size());
  EXPECT_NEAR(sample_variance(y), 198.0, 19.8);
  EXPECT_NEAR(g.noise_variance, 99.0, 2.0);
}

TEST(Generate, DeterministicPerSeed) {
  const auto a = generate(linear_identity(40, 12));
  const auto b = generate(linear_identity(40, 12));
  EXPECT_TRUE(testing::bitwise_equal(a.data.x, b.data.x));
  EXPECT_TRUE(testing::bitwise_equal(a.data.y, b.data.y));
  const auto c = generate(linear_identity(40, 13));
  EXPECT_FALSE(testing::bitwise_equal(a.data.y, c.data.y));
}

TEST(Generate, NoiseIndependentOfCovariates) {
  const Index n = 5000;
  auto cfg = linear_identity(n, 31);
  cfg.cov = CovarianceSpec::with_defaults(CovarianceKind::ar_pos, 10);
  const auto g = generate(cfg);
  Vector eps(n);
  for (Index i = 0; i < n; ++i) eps(i) = g.data.y(i) - regression_mean(cfg.model, testing::row_vector(g.data.x, i));
  const auto corr = [&](const Vector& a, const Vector& b) {
    const Vector ac = a.array() - a.mean();
    const Vector bc = b.array() - b.mean();
    return ac.dot(bc) / std::sqrt(ac.squaredNorm() * bc.squaredNorm());
  };
  for (Index j = 0; j < 10; ++j) EXPECT_LT(std::abs(corr(eps, g.data.x.col(j))), 4.0 / std::sqrt(double(n)));
}

TEST(Generate, RejectsInvalidConfig) {
  auto c = linear_identity(1, 1);
  EXPECT_THROW(generate(c), std::invalid_argument);
  c = linear_identity(10, 1);
  c.target_sn = -1.0;
  EXPECT_THROW(generate(c), std::invalid_argument);
}

TEST(Names, RoundTrip) {
  for (auto kind : {CovarianceKind::ar_pos, CovarianceKind::ar_neg, CovarianceKind::compound_symmetric,
                    CovarianceKind::toeplitz, CovarianceKind::scaled_identity}) {
    EXPECT_EQ(parse_covariance_kind(to_string(kind)), kind);
  }
  EXPECT_EQ(parse_regression_kind("non_continuous"), RegressionKind::non_continuous);
  EXPECT_THROW(parse_regression_kind("cubic"), ConfigError);
}

}  // namespace
}  // namespace misspred
